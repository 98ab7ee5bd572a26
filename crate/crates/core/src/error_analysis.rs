//! Discrete error norms and convergence-rate fitting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::ReferenceSolution;
use crate::legendre::RefPoly;
use crate::quadrature::QuadratureRule;
use crate::time_solver::{BurgersSolver, SolverConfig};
use crate::weak_space::{WeakFunction, WgSpace};

/// `‖u − v^0‖_h`, element by element with `rule`.
pub fn discrete_l2_error(
    exact: impl Fn(f64) -> Result<f64>,
    space: &WgSpace,
    state: &WeakFunction,
    rule: &QuadratureRule,
) -> Result<f64> {
    let polys = (0..space.n_elements()).map(|e| state.interior_poly(e));
    elementwise_error(exact, space, polys, rule)
}

/// `‖u_x − d_{w,r} v‖_h`, element by element with `rule`.
pub fn discrete_h1_error(
    exact_dx: impl Fn(f64) -> Result<f64>,
    space: &WgSpace,
    state: &WeakFunction,
    rule: &QuadratureRule,
) -> Result<f64> {
    let polys = (0..space.n_elements()).map(|e| space.weak_derivative_unchecked(state, e));
    elementwise_error(exact_dx, space, polys, rule)
}

fn elementwise_error(
    exact: impl Fn(f64) -> Result<f64>,
    space: &WgSpace,
    polys: impl Iterator<Item = RefPoly>,
    rule: &QuadratureRule,
) -> Result<f64> {
    let mesh = space.mesh();
    let mut total = 0.0;
    for (e, p) in polys.enumerate() {
        let (a, b) = mesh.element(e);
        let half = 0.5 * (b - a);
        let mut local = 0.0;
        for (&t, &w) in rule.points.iter().zip(&rule.weights) {
            let d = exact(a + (t + 1.0) * half)? - p.eval(t);
            local += w * d * d;
        }
        total += half * local;
    }
    Ok(total.sqrt())
}

/// Errors of one run at its final time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub k: usize,
    pub n_elements: usize,
    pub h: f64,
    pub nu: f64,
    pub tau: f64,
    pub time: f64,
    pub l2_error: f64,
    pub h1_error: f64,
    pub max_picard_iterations: usize,
    /// `max_n (E_n + 2τν D_n − E_{n−1})`; non-positive when energy-stable.
    pub max_energy_violation: f64,
}

impl ErrorReport {
    pub fn evaluate(
        exact: &dyn ReferenceSolution,
        space: &WgSpace,
        state: &WeakFunction,
        config: &SolverConfig,
        time: f64,
    ) -> Result<Self> {
        let rule = space.error_rule();
        Ok(Self {
            k: config.k,
            n_elements: config.n_elements,
            h: space.mesh().h(),
            nu: config.nu,
            tau: config.tau,
            time,
            l2_error: discrete_l2_error(|x| exact.value(x, time), space, state, rule)?,
            h1_error: discrete_h1_error(|x| exact.dx(x, time), space, state, rule)?,
            max_picard_iterations: 0,
            max_energy_violation: f64::NEG_INFINITY,
        })
    }
}

/// Time-step choice for a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TimeStep {
    Fixed(f64),
    /// `τ = min(cap, h^{k+1} / 20)`, shrunk so that `T/τ` is an integer.
    Scaled { cap: f64 },
}

impl TimeStep {
    pub const DEFAULT: TimeStep = TimeStep::Scaled { cap: 1e-4 };

    pub fn resolve(&self, k: usize, h: f64, t_final: f64) -> f64 {
        match *self {
            TimeStep::Fixed(tau) => tau,
            TimeStep::Scaled { cap } => {
                let target = cap.min(h.powi(k as i32 + 1) / 20.0);
                let steps = (t_final / target - 1e-9).ceil().max(1.0);
                t_final / steps
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_elements: usize,
    pub h: f64,
    pub tau: f64,
    pub l2_error: f64,
    pub h1_error: f64,
    /// `log2(e_prev / e)` against the previous row when `h` exactly halved.
    pub l2_rate: Option<f64>,
    pub h1_rate: Option<f64>,
    pub max_picard_iterations: usize,
    pub max_energy_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slopes of `log e` against `log h`.
    pub l2_slope: Option<f64>,
    pub h1_slope: Option<f64>,
}

impl ConvergenceTable {
    /// Sorts reports by decreasing `h` and fits rates.
    pub fn from_reports(mut reports: Vec<ErrorReport>) -> Self {
        reports.sort_by(|a, b| b.h.total_cmp(&a.h));
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(reports.len());
        for r in &reports {
            let (l2_rate, h1_rate) = match rows.last() {
                Some(p) if (p.h / r.h - 2.0).abs() < 1e-12 => (
                    Some((p.l2_error / r.l2_error).log2()),
                    Some((p.h1_error / r.h1_error).log2()),
                ),
                _ => (None, None),
            };
            rows.push(ConvergenceRow {
                n_elements: r.n_elements,
                h: r.h,
                tau: r.tau,
                l2_error: r.l2_error,
                h1_error: r.h1_error,
                l2_rate,
                h1_rate,
                max_picard_iterations: r.max_picard_iterations,
                max_energy_violation: r.max_energy_violation,
            });
        }
        let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
        let l2: Vec<f64> = rows.iter().map(|r| r.l2_error).collect();
        let h1: Vec<f64> = rows.iter().map(|r| r.h1_error).collect();
        Self {
            l2_slope: log_log_slope(&hs, &l2),
            h1_slope: log_log_slope(&hs, &h1),
            rows,
        }
    }
}

/// Least-squares slope of `log y` against `log x`; `None` with fewer than
/// two points or non-positive data.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() || x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Parameters of a mesh-refinement study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub k: usize,
    pub nu: f64,
    pub t_final: f64,
    pub mesh_sizes: Vec<usize>,
    pub time_step: TimeStep,
    pub picard_tol: f64,
    pub picard_max: usize,
}

impl StudyConfig {
    pub fn new(k: usize, nu: f64, t_final: f64, mesh_sizes: Vec<usize>) -> Self {
        Self {
            k,
            nu,
            t_final,
            mesh_sizes,
            time_step: TimeStep::DEFAULT,
            picard_tol: 1e-12,
            picard_max: 50,
        }
    }

    pub fn solver_config(&self, n_elements: usize) -> SolverConfig {
        let h = 1.0 / n_elements as f64;
        let tau = self.time_step.resolve(self.k, h, self.t_final);
        let mut c = SolverConfig::new(self.k, n_elements, self.nu, tau, self.t_final);
        c.picard_tol = self.picard_tol;
        c.picard_max = self.picard_max;
        c
    }
}

/// Solves once and reports final-time errors and stability diagnostics.
pub fn run_and_measure(exact: &dyn ReferenceSolution, config: &SolverConfig) -> Result<ErrorReport> {
    let solver = BurgersSolver::new(config.clone())?;
    let mut last = None;
    let steps = solver.step_count();
    let (infos, e0) = solver.run_with(
        |x| exact.initial(x),
        |n, _, u| {
            if n == steps {
                last = Some(u.clone());
            }
        },
    )?;
    let state = last.expect("observer sees the final step");
    let time = steps as f64 * config.tau;
    let mut report = ErrorReport::evaluate(exact, solver.space(), &state, config, time)?;
    report.max_picard_iterations = infos.iter().map(|i| i.picard_iterations).max().unwrap_or(0);
    let mut prev = e0;
    for i in &infos {
        let v = i.energy + 2.0 * config.tau * config.nu * i.dissipation - prev;
        report.max_energy_violation = report.max_energy_violation.max(v);
        prev = i.energy;
    }
    Ok(report)
}

/// Runs every mesh of `study` (in parallel) and fits convergence rates.
pub fn convergence_study(exact: &dyn ReferenceSolution, study: &StudyConfig) -> Result<ConvergenceTable> {
    if study.mesh_sizes.is_empty() {
        return Err(invalid("convergence study needs at least one mesh"));
    }
    let reports: Vec<ErrorReport> = study
        .mesh_sizes
        .par_iter()
        .map(|&n| {
            run_and_measure(exact, &study.solver_config(n)).map_err(|e| Error::Mesh {
                n_elements: n,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceTable::from_reports(reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_uniform_mesh;

    #[test]
    fn slope_of_power_law() {
        let x = [0.1, 0.05, 0.025];
        let y: Vec<f64> = x.iter().map(|h: &f64| 3.0 * h.powi(2)).collect();
        assert!((log_log_slope(&x, &y).unwrap() - 2.0).abs() < 1e-12);
        assert!(log_log_slope(&x[..1], &y[..1]).is_none());
        assert!(log_log_slope(&[0.1, 0.05], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn scaled_time_step_divides_t_final() {
        let ts = TimeStep::DEFAULT;
        let tau = ts.resolve(1, 1.0 / 128.0, 1.0);
        assert!(tau <= 1.0 / (128.0f64 * 128.0) / 20.0 * (1.0 + 1e-12));
        let m = 1.0 / tau;
        assert!((m - m.round()).abs() < 1e-9);
        assert_eq!(ts.resolve(0, 1.0 / 8.0, 1.0), 1e-4);
        assert_eq!(TimeStep::Fixed(0.5).resolve(3, 0.1, 1.0), 0.5);
    }

    #[test]
    fn zero_state_error_is_norm_of_exact() {
        let space = WgSpace::new(build_uniform_mesh(4).unwrap(), 1).unwrap();
        let z = space.zero_function();
        let e = discrete_l2_error(|x| Ok(x), &space, &z, space.error_rule()).unwrap();
        assert!((e - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        let e = discrete_h1_error(|_| Ok(2.0), &space, &z, space.error_rule()).unwrap();
        assert!((e - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rates_only_between_halvings() {
        let mk = |n: usize, e: f64| ErrorReport {
            k: 0,
            n_elements: n,
            h: 1.0 / n as f64,
            nu: 0.1,
            tau: 1e-3,
            time: 1.0,
            l2_error: e,
            h1_error: e,
            max_picard_iterations: 1,
            max_energy_violation: 0.0,
        };
        let t = ConvergenceTable::from_reports(vec![mk(16, 0.25), mk(8, 1.0), mk(24, 0.1)]);
        assert_eq!(t.rows[0].n_elements, 8);
        assert!(t.rows[0].l2_rate.is_none());
        assert!((t.rows[1].l2_rate.unwrap() - 2.0).abs() < 1e-12);
        assert!(t.rows[2].l2_rate.is_none());
        let single = ConvergenceTable::from_reports(vec![mk(8, 1.0)]);
        assert!(single.l2_slope.is_none() && single.rows[0].h1_rate.is_none());
    }
}
