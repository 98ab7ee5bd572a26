//! Gauss–Legendre quadrature on [-1, 1].

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::legendre::legendre_eval_with_derivative;

pub const MAX_GAUSS_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.points.len() - 1
    }

    /// ∫_{-1}^{1} f.
    pub fn integrate_ref(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// ∫_a^b f.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate_ref(|t| f(mid + half * t))
    }
}

/// `n`-point Gauss–Legendre rule. Abscissae are the roots of `P_n`, found by
/// Newton iteration from the asymptotic guess `cos(π(i − 1/4)/(n + 1/2))`.
pub fn gauss_rule(n_points: usize) -> Result<QuadratureRule> {
    if n_points == 0 || n_points > MAX_GAUSS_POINTS {
        return Err(invalid(format!(
            "gauss_rule: n_points must be in 1..={MAX_GAUSS_POINTS}, got {n_points}"
        )));
    }
    let n = n_points;
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_eval_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Roots come out in decreasing order; store ascending and mirror.
        points[n - 1 - i] = x;
        points[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    Ok(QuadratureRule { points, weights })
}
