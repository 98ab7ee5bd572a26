//! Reference solutions of the viscous Burgers' equation on (0, 1) with
//! homogeneous Dirichlet data.
//!
//! * [`FourierSolution`]: Cole–Hopf series for `g(x) = sin(πx)`.
//! * [`WoodSolution`]: closed form for `g(x) = 2νπ sin(πx) / (σ + cos(πx))`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_rule, QuadratureRule};

/// Absolute tolerance of the coefficient quadrature.
pub const COEFF_TOL: f64 = 1e-13;
/// Truncation threshold on the last retained series term.
pub const TRUNCATION_TOL: f64 = 1e-14;
pub const MIN_TERMS: usize = 20;
pub const MAX_TERMS: usize = 4000;

/// A solution of Burgers' equation that can be evaluated with its
/// x-derivative.
pub trait ReferenceSolution: Sync {
    fn value(&self, x: f64, t: f64) -> Result<f64>;
    fn dx(&self, x: f64, t: f64) -> Result<f64>;
    /// Initial datum `g(x) = u(x, 0)`.
    fn initial(&self, x: f64) -> f64;
}

/// Truncated Cole–Hopf series for initial data `sin(πx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSolution {
    nu: f64,
    /// `a_0, a_1, …, a_K`, scaled by the integrand maximum.
    coeffs: Vec<f64>,
    t_min: Option<f64>,
}

impl FourierSolution {
    /// Computes `a_0..a_K` to absolute tolerance `tol`.
    pub fn with_terms(nu: f64, n_terms: usize, tol: f64) -> Result<Self> {
        check_nu(nu)?;
        if n_terms < 1 {
            return Err(invalid("Fourier truncation must keep at least one term"));
        }
        let integrator = CoefficientIntegrator::new(nu, tol)?;
        let coeffs = (0..=n_terms).map(|n| integrator.coefficient(n)).collect();
        let sol = Self {
            nu,
            coeffs,
            t_min: None,
        };
        sol.check_a0()?;
        Ok(sol)
    }

    /// Chooses `K ≥ 20` so that `2πν K |a_K| e^{−K²π²ν t_min}` is below
    /// `1e-14` times `e^{−1/(πν)}`, the minimum of the initial heat datum and
    /// by the maximum principle a lower bound for the series denominator.
    pub fn adaptive(nu: f64, t_min: f64) -> Result<Self> {
        check_nu(nu)?;
        if !(t_min > 0.0) {
            return Err(invalid("t_min must be positive"));
        }
        let integrator = CoefficientIntegrator::new(nu, COEFF_TOL)?;
        let mut coeffs = vec![integrator.coefficient(0)];
        let a0 = coeffs[0];
        if !(a0 > f64::MIN_POSITIVE) || !a0.is_finite() {
            return Err(Error::UnsupportedViscosity(nu));
        }
        let den_floor = (-1.0 / (PI * nu)).exp().max(f64::MIN_POSITIVE);
        loop {
            let n = coeffs.len();
            if n > MAX_TERMS {
                return Err(Error::UnsupportedViscosity(nu));
            }
            let a = integrator.coefficient(n);
            coeffs.push(a);
            let nf = n as f64;
            let bound = 2.0 * PI * nu * nf * a.abs() * (-nf * nf * PI * PI * nu * t_min).exp();
            if n >= MIN_TERMS && bound < TRUNCATION_TOL * den_floor {
                break;
            }
        }
        Ok(Self {
            nu,
            coeffs,
            t_min: Some(t_min),
        })
    }

    fn check_a0(&self) -> Result<()> {
        let a0 = self.coeffs[0];
        if !(a0 > f64::MIN_POSITIVE) || !a0.is_finite() {
            return Err(Error::UnsupportedViscosity(self.nu));
        }
        Ok(())
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn n_terms(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn t_min(&self) -> Option<f64> {
        self.t_min
    }

    /// Returns `(N, D, N_x, D_x)` of `u = 2πν N / D`.
    fn series(&self, x: f64, t: f64) -> Result<(f64, f64, f64, f64)> {
        if !(t > 0.0) {
            return Err(invalid(format!("Fourier series needs t > 0, got {t}")));
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(invalid(format!("x = {x} outside [0, 1]")));
        }
        let a0 = self.coeffs[0];
        let (mut num, mut den, mut num_x, mut den_x) = (0.0, a0, 0.0, 0.0);
        for (n, &a) in self.coeffs.iter().enumerate().skip(1) {
            let nf = n as f64;
            let decay = a * (-nf * nf * PI * PI * self.nu * t).exp();
            let (s, c) = (nf * PI * x).sin_cos();
            num += decay * nf * s;
            den += decay * c;
            num_x += decay * nf * nf * PI * c;
            den_x -= decay * nf * PI * s;
        }
        if den < 1e-12 * a0 {
            return Err(Error::Evaluation(format!(
                "series denominator {den:e} too small at x = {x}, t = {t}"
            )));
        }
        Ok((num, den, num_x, den_x))
    }

    /// `u(x, t)`; exactly zero at the boundary nodes.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if (x == 0.0 || x == 1.0) && t > 0.0 {
            return Ok(0.0);
        }
        let (num, den, _, _) = self.series(x, t)?;
        Ok(2.0 * PI * self.nu * num / den)
    }

    pub fn eval_dx(&self, x: f64, t: f64) -> Result<f64> {
        let (num, den, num_x, den_x) = self.series(x, t)?;
        Ok(2.0 * PI * self.nu * (num_x * den - num * den_x) / (den * den))
    }
}

impl ReferenceSolution for FourierSolution {
    fn value(&self, x: f64, t: f64) -> Result<f64> {
        self.eval(x, t)
    }

    fn dx(&self, x: f64, t: f64) -> Result<f64> {
        self.eval_dx(x, t)
    }

    fn initial(&self, x: f64) -> f64 {
        (PI * x).sin()
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(invalid(format!("viscosity must be positive, got {nu}")));
    }
    Ok(())
}

/// Adaptive panel quadrature of `exp(−(1 − cos πx)/(2πν)) cos(nπx)` on [0, 1].
///
/// The exponent is at most zero with its maximum at `x = 0`; the integrand is
/// evaluated as `exp(e(x) − s)` with `s` that maximum, so coefficients are
/// scaled by `e^{−s}`. The series is a ratio and is unaffected by the scale.
struct CoefficientIntegrator {
    nu: f64,
    tol: f64,
    shift: f64,
    rule: QuadratureRule,
}

impl CoefficientIntegrator {
    const MAX_DEPTH: u32 = 40;

    fn new(nu: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(invalid("quadrature tolerance must be positive"));
        }
        let shift = Self::exponent(nu, 0.0);
        Ok(Self {
            nu,
            tol,
            shift,
            rule: gauss_rule(16)?,
        })
    }

    fn exponent(nu: f64, x: f64) -> f64 {
        -(1.0 - (PI * x).cos()) / (2.0 * PI * nu)
    }

    fn coefficient(&self, n: usize) -> f64 {
        let f = |x: f64| (Self::exponent(self.nu, x) - self.shift).exp() * (n as f64 * PI * x).cos();
        // split so that each starting panel sees at most a few oscillations
        let panels = (n / 4).max(1);
        let width = 1.0 / panels as f64;
        let tol = self.tol / panels as f64;
        let total: f64 = (0..panels)
            .map(|p| {
                let (a, b) = (p as f64 * width, (p + 1) as f64 * width);
                let whole = self.rule.integrate(a, b, f);
                self.adapt(&f, a, b, whole, tol, 0)
            })
            .sum();
        if n == 0 {
            total
        } else {
            2.0 * total
        }
    }

    fn adapt(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = self.rule.integrate(a, m, f);
        let right = self.rule.integrate(m, b, f);
        if (left + right - whole).abs() <= tol || depth >= Self::MAX_DEPTH {
            return left + right;
        }
        self.adapt(f, a, m, left, 0.5 * tol, depth + 1) + self.adapt(f, m, b, right, 0.5 * tol, depth + 1)
    }
}

/// Closed-form solution with parameter `σ > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoodSolution {
    nu: f64,
    sigma: f64,
}

impl WoodSolution {
    pub fn new(nu: f64, sigma: f64) -> Result<Self> {
        check_nu(nu)?;
        if !(sigma > 1.0) {
            return Err(invalid(format!("sigma must exceed 1, got {sigma}")));
        }
        Ok(Self { nu, sigma })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let e = (-PI * PI * self.nu * t).exp();
        let (s, c) = (PI * x).sin_cos();
        2.0 * self.nu * PI * e * s / (self.sigma + e * c)
    }

    pub fn eval_dx(&self, x: f64, t: f64) -> f64 {
        let e = (-PI * PI * self.nu * t).exp();
        let c = (PI * x).cos();
        let d = self.sigma + e * c;
        2.0 * self.nu * PI * PI * e * (self.sigma * c + e) / (d * d)
    }

    /// `g(x) = 2νπ sin(πx) / (σ + cos(πx))`.
    pub fn initial_condition(&self, x: f64) -> f64 {
        2.0 * self.nu * PI * (PI * x).sin() / (self.sigma + (PI * x).cos())
    }
}

impl ReferenceSolution for WoodSolution {
    fn value(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.eval(x, t))
    }

    fn dx(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.eval_dx(x, t))
    }

    fn initial(&self, x: f64) -> f64 {
        self.initial_condition(x)
    }
}

/// `max |u_t + u u_x − ν u_xx|` over `samples`, with derivatives from
/// second-order central differences of spacing `delta`.
pub fn pde_residual(
    u: impl Fn(f64, f64) -> Result<f64>,
    nu: f64,
    samples: &[(f64, f64)],
    delta: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(x, t) in samples {
        let c = u(x, t)?;
        let (xp, xm) = (u(x + delta, t)?, u(x - delta, t)?);
        let (tp, tm) = (u(x, t + delta)?, u(x, t - delta)?);
        let ut = (tp - tm) / (2.0 * delta);
        let ux = (xp - xm) / (2.0 * delta);
        let uxx = (xp - 2.0 * c + xm) / (delta * delta);
        worst = worst.max((ut + c * ux - nu * uxx).abs());
    }
    Ok(worst)
}
