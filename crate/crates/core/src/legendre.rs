//! Legendre polynomials on the reference interval [-1, 1].

/// Value of the Legendre polynomial `P_degree(t)` by the three-term recurrence.
pub fn legendre_eval(degree: usize, t: f64) -> f64 {
    legendre_eval_with_derivative(degree, t).0
}

/// `(P_degree(t), P'_degree(t))`.
pub fn legendre_eval_with_derivative(degree: usize, t: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for n in 0..degree {
        let nf = n as f64;
        let p_next = ((2.0 * nf + 1.0) * t * p - nf * p_prev) / (nf + 1.0);
        // P'_{n+1} = P'_{n-1} + (2n+1) P_n
        let d_next = d_prev + (2.0 * nf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Fills `values[j] = P_j(t)` for `j = 0..values.len()`.
pub fn legendre_values(t: f64, values: &mut [f64]) {
    let n = values.len();
    if n == 0 {
        return;
    }
    values[0] = 1.0;
    if n > 1 {
        values[1] = t;
    }
    for j in 2..n {
        let jf = j as f64;
        values[j] = ((2.0 * jf - 1.0) * t * values[j - 1] - (jf - 1.0) * values[j - 2]) / jf;
    }
}

/// Fills `values[j] = P_j(t)` and `derivs[j] = P'_j(t)`.
pub fn legendre_values_and_derivatives(t: f64, values: &mut [f64], derivs: &mut [f64]) {
    assert_eq!(values.len(), derivs.len());
    legendre_values(t, values);
    let n = derivs.len();
    for j in 0..n {
        derivs[j] = match j {
            0 => 0.0,
            1 => 1.0,
            _ => derivs[j - 2] + (2.0 * j as f64 - 1.0) * values[j - 1],
        };
    }
}

/// `∫_{-1}^{1} P_j² dt = 2 / (2j + 1)`.
#[inline]
pub fn legendre_norm_sq(j: usize) -> f64 {
    2.0 / (2.0 * j as f64 + 1.0)
}

/// A polynomial stored by its Legendre coefficients on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RefPoly {
    pub coeffs: Vec<f64>,
}

impl RefPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![0.0; degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value at reference coordinate `t`.
    pub fn eval(&self, t: f64) -> f64 {
        // Clenshaw for the Legendre recurrence.
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate().rev() {
            let jf = j as f64;
            let alpha = (2.0 * jf + 1.0) / (jf + 1.0) * t;
            let beta = -(jf + 1.0) / (jf + 2.0);
            let b0 = c + alpha * b1 + beta * b2;
            b2 = b1;
            b1 = b0;
        }
        b1
    }

    /// Derivative with respect to the reference coordinate.
    pub fn eval_derivative(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * legendre_eval_with_derivative(j, t).1)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;

    fn explicit(degree: usize, t: f64) -> f64 {
        match degree {
            0 => 1.0,
            1 => t,
            2 => (3.0 * t * t - 1.0) / 2.0,
            3 => (5.0 * t.powi(3) - 3.0 * t) / 2.0,
            4 => (35.0 * t.powi(4) - 30.0 * t * t + 3.0) / 8.0,
            _ => unreachable!(),
        }
    }

    #[test]
    fn small_degree_values() {
        assert_eq!(legendre_eval(0, 0.3), 1.0);
        assert_eq!(legendre_eval(0, -0.9), 1.0);
        assert_eq!(legendre_eval(1, 0.5), 0.5);
        assert!((legendre_eval(2, 0.5) + 0.125).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_explicit_formulas() {
        for d in 0..=4 {
            for i in 0..=40 {
                let t = -1.0 + i as f64 / 20.0;
                assert!((legendre_eval(d, t) - explicit(d, t)).abs() < 1e-14, "P_{d}({t})");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for d in 0..8 {
            for i in 1..20 {
                let t = -1.0 + i as f64 / 10.0;
                let fd = (legendre_eval(d, t + h) - legendre_eval(d, t - h)) / (2.0 * h);
                let (_, dp) = legendre_eval_with_derivative(d, t);
                assert!((fd - dp).abs() < 1e-7 * (1.0 + dp.abs()), "P'_{d}({t})");
            }
        }
    }

    #[test]
    fn orthogonality() {
        let rule = gauss_rule(10).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let ip: f64 = rule
                    .points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&t, &w)| w * legendre_eval(i, t) * legendre_eval(j, t))
                    .sum();
                let expect = if i == j { legendre_norm_sq(i) } else { 0.0 };
                assert!((ip - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn batch_values_agree_with_single() {
        let mut v = [0.0; 7];
        let mut d = [0.0; 7];
        legendre_values_and_derivatives(0.37, &mut v, &mut d);
        for j in 0..7 {
            let (p, dp) = legendre_eval_with_derivative(j, 0.37);
            assert!((v[j] - p).abs() < 1e-15);
            assert!((d[j] - dp).abs() < 1e-13);
        }
    }

    #[test]
    fn clenshaw_eval() {
        let p = RefPoly::new(vec![0.5, -1.0, 2.0, 0.25]);
        for i in 0..=10 {
            let t = -1.0 + i as f64 / 5.0;
            let direct: f64 = (0..4).map(|j| p.coeffs[j] * legendre_eval(j, t)).sum();
            assert!((p.eval(t) - direct).abs() < 1e-14);
        }
        assert_eq!(p.degree(), 3);
    }
}
