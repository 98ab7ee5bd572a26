//! Backward-Euler time stepping with Picard resolution of the convection
//! nonlinearity.
//!
//! Each step solves `((1/τ)M + νA + C(W)) U = (1/τ) M U_prev` with `W` the
//! previous Picard iterate, starting from `W = U_prev`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assembly::{Assembler, GlobalMatrix};
use crate::error::{invalid, Error, Result};
use crate::mesh::build_uniform_mesh;
use crate::weak_space::{WeakFunction, WgSpace};

/// Tolerance on `T/τ` being an integer.
pub const STEP_COUNT_TOL: f64 = 1e-9;

/// Discretization and stepping parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub k: usize,
    pub n_elements: usize,
    pub nu: f64,
    pub tau: f64,
    pub t_final: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    pub quad_assembly: usize,
    pub quad_error: usize,
}

impl SolverConfig {
    pub fn new(k: usize, n_elements: usize, nu: f64, tau: f64, t_final: f64) -> Self {
        Self {
            k,
            n_elements,
            nu,
            tau,
            t_final,
            picard_tol: 1e-12,
            picard_max: 50,
            quad_assembly: 2 * k + 2,
            quad_error: k + 6,
        }
    }

    /// Checks parameter ranges and returns the step count `M = T/τ`.
    pub fn validate(&self) -> Result<usize> {
        if self.n_elements < 2 {
            return Err(invalid("n_elements must be at least 2"));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(invalid(format!("nu must be positive, got {}", self.nu)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(invalid(format!("t_final must be positive, got {}", self.t_final)));
        }
        if !(self.picard_tol > 0.0) || self.picard_max == 0 {
            return Err(invalid("picard_tol must be positive and picard_max nonzero"));
        }
        if self.quad_assembly < 2 * self.k + 2 {
            return Err(invalid(format!(
                "quad_assembly must be at least {} for k = {}",
                2 * self.k + 2,
                self.k
            )));
        }
        self.step_count()
    }

    pub fn step_count(&self) -> Result<usize> {
        let ratio = self.t_final / self.tau;
        let m = ratio.round();
        if (ratio - m).abs() > STEP_COUNT_TOL * ratio.max(1.0) || m < 1.0 {
            return Err(invalid(format!(
                "T / tau = {ratio} is not an integer step count"
            )));
        }
        Ok(m as usize)
    }

    pub fn build_space(&self) -> Result<WgSpace> {
        WgSpace::with_quadrature(
            build_uniform_mesh(self.n_elements)?,
            self.k,
            self.quad_assembly,
            self.quad_error,
        )
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub step: usize,
    pub time: f64,
    pub picard_iterations: usize,
    pub last_increment: f64,
    /// `‖U_n^0‖_h²`
    pub energy: f64,
    /// `‖d_{w,r} U_n‖_h²`
    pub dissipation: f64,
}

/// Which states a trajectory retains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoreMode {
    All,
    Final,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<WeakFunction>,
    pub times: Vec<f64>,
    /// One entry per step `n = 1..M`.
    pub diagnostics: Vec<StepInfo>,
    pub initial_energy: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &WeakFunction {
        self.states.last().expect("trajectory holds at least U_0")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least t_0")
    }

    pub fn max_picard_iterations(&self) -> usize {
        self.diagnostics.iter().map(|d| d.picard_iterations).max().unwrap_or(0)
    }

    /// Largest violation of `E_n + 2τν D_n ≤ E_{n−1}` over all steps.
    pub fn max_energy_violation(&self, tau: f64, nu: f64) -> f64 {
        let mut prev = self.initial_energy;
        let mut worst = f64::NEG_INFINITY;
        for d in &self.diagnostics {
            worst = worst.max(d.energy + 2.0 * tau * nu * d.dissipation - prev);
            prev = d.energy;
        }
        worst
    }
}

/// Owns the discretization for one configuration and advances states.
#[derive(Debug, Clone)]
pub struct BurgersSolver {
    config: SolverConfig,
    steps: usize,
    assembler: Assembler,
    linear_part: GlobalMatrix,
}

impl BurgersSolver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        let steps = config.validate()?;
        let space = Arc::new(config.build_space()?);
        let assembler = Assembler::new(space);
        let linear_part = assembler.linear_part(config.nu, config.tau);
        Ok(Self {
            config,
            steps,
            assembler,
            linear_part,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn space(&self) -> &WgSpace {
        self.assembler.space()
    }

    pub fn assembler(&self) -> &Assembler {
        &self.assembler
    }

    pub fn step_count(&self) -> usize {
        self.steps
    }

    /// `U_0 = Q_h g`; `g` must satisfy the homogeneous boundary conditions.
    pub fn initial_state(&self, g: impl Fn(f64) -> f64) -> Result<WeakFunction> {
        let (g0, g1) = (g(0.0), g(1.0));
        if g0.abs() > 1e-12 || g1.abs() > 1e-12 {
            return Err(invalid(format!(
                "initial data must vanish at both ends, got g(0) = {g0}, g(1) = {g1}"
            )));
        }
        let mut u0 = self.space().qh_project(g);
        let n = u0.n_elements();
        u0.node_values_mut()[0] = 0.0;
        u0.node_values_mut()[n] = 0.0;
        Ok(u0)
    }

    /// One backward-Euler step. Returns the new state and the Picard
    /// iteration count.
    pub fn step(&self, prev: &WeakFunction) -> Result<(WeakFunction, usize)> {
        self.step_detailed(prev).map(|(u, iters, _)| (u, iters))
    }

    fn step_detailed(&self, prev: &WeakFunction) -> Result<(WeakFunction, usize, f64)> {
        let space = self.space();
        if !prev.is_homogeneous() {
            return Err(invalid("previous state is not in S_h^0"));
        }
        let (k, n_el) = (space.k(), space.n_elements());
        let rhs = self.assembler.step_rhs(prev, self.config.tau);
        let mut w = prev.clone();
        let mut increment = f64::INFINITY;
        for iter in 1..=self.config.picard_max {
            let mut matrix = self.linear_part.clone();
            self.assembler.add_convection(&w, 1.0, &mut matrix)?;
            let u = WeakFunction::from_dofs(k, n_el, &matrix.solve(&rhs)?)?;
            let mut diff = u.clone();
            diff.axpy(-1.0, &w);
            increment = space.full_norm(&diff);
            let size = space.full_norm(&u);
            if !increment.is_finite() {
                break;
            }
            if increment <= self.config.picard_tol * size.max(1.0) {
                return Ok((u, iter, increment));
            }
            w = u;
        }
        Err(Error::PicardNonConvergence {
            step: None,
            iterations: self.config.picard_max,
            increment,
        })
    }

    /// Residual of the nonlinear scheme at `u` (system assembled with `W = u`).
    pub fn nonlinear_residual(&self, u: &WeakFunction, prev: &WeakFunction) -> Result<Vec<f64>> {
        let system = self.assembler.system(u, prev, self.config.nu, self.config.tau)?;
        let au = system.matrix.apply(&u.to_dofs());
        Ok(au.iter().zip(&system.rhs).map(|(a, b)| a - b).collect())
    }

    /// Runs all `M` steps, calling `observer(n, t_n, U_n)` for `n = 0..=M`.
    pub fn run_with<F>(&self, g: impl Fn(f64) -> f64, mut observer: F) -> Result<(Vec<StepInfo>, f64)>
    where
        F: FnMut(usize, f64, &WeakFunction),
    {
        let space = self.space();
        let mut state = self.initial_state(g)?;
        let initial_energy = space.interior_norm_sq(&state);
        observer(0, 0.0, &state);
        let mut infos = Vec::with_capacity(self.steps);
        for n in 1..=self.steps {
            let (next, iters, inc) = self.step_detailed(&state).map_err(|e| match e {
                Error::PicardNonConvergence { iterations, increment, .. } => Error::PicardNonConvergence {
                    step: Some(n),
                    iterations,
                    increment,
                },
                other => other,
            })?;
            let time = n as f64 * self.config.tau;
            infos.push(StepInfo {
                step: n,
                time,
                picard_iterations: iters,
                last_increment: inc,
                energy: space.interior_norm_sq(&next),
                dissipation: space.weak_derivative_norm_sq(&next),
            });
            observer(n, time, &next);
            state = next;
        }
        Ok((infos, initial_energy))
    }

    pub fn solve_trajectory(&self, g: impl Fn(f64) -> f64, store: StoreMode) -> Result<Trajectory> {
        let mut states = Vec::new();
        let mut times = Vec::new();
        let last = self.steps;
        let (diagnostics, initial_energy) = self.run_with(g, |n, t, u| {
            if store == StoreMode::All || n == 0 || n == last {
                states.push(u.clone());
                times.push(t);
            }
        })?;
        Ok(Trajectory {
            states,
            times,
            diagnostics,
            initial_energy,
        })
    }
}

/// Convenience wrapper: build a solver for `config` and run it.
pub fn solve_trajectory(
    g: impl Fn(f64) -> f64,
    config: &SolverConfig,
    store: StoreMode,
) -> Result<Trajectory> {
    BurgersSolver::new(config.clone())?.solve_trajectory(g, store)
}
