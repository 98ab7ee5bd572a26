//! Experiment driver: config files, the `solve`/`table`/`converge` commands
//! and their CSV / JSON-lines output.

pub mod config;
pub mod output;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::error_analysis::{convergence_study, ConvergenceTable, StudyConfig, TimeStep};
use crate::exact::{FourierSolution, ReferenceSolution};
use crate::time_solver::{BurgersSolver, SolverConfig, StepInfo, Trajectory, STEP_COUNT_TOL};
use crate::weak_space::{EvalMode, WeakFunction};

pub use config::{OutputFormat, Problem, RunConfig, SampleMode};
pub use output::{read_table_csv, StateRow, TableRow};

impl From<SampleMode> for EvalMode {
    fn from(m: SampleMode) -> Self {
        match m {
            SampleMode::Auto => EvalMode::Auto,
            SampleMode::Node => EvalMode::Node,
            SampleMode::Interior => EvalMode::Interior,
        }
    }
}

/// Step indices `n` with `nτ = t` for each requested output time.
pub fn output_steps(times: &[f64], tau: f64, steps: usize) -> Result<Vec<usize>> {
    times
        .iter()
        .map(|&t| {
            let n = (t / tau).round();
            if t < 0.0 || (n - t / tau).abs() > STEP_COUNT_TOL * (t / tau).max(1.0) || n as usize > steps {
                Err(Error::Config {
                    line: 0,
                    key: "output_times".into(),
                    message: format!("{t} is not a multiple of tau = {tau} within [0, T]"),
                })
            } else {
                Ok(n as usize)
            }
        })
        .collect()
}

/// One solver run sampled at fixed points and times.
#[derive(Debug, Clone)]
pub struct SampledRun {
    pub rows: Vec<TableRow>,
    /// `(t, U)` at each output time.
    pub states: Vec<(f64, WeakFunction)>,
    pub trajectory: Trajectory,
}

/// Runs `config` from `g`, sampling `xs` at `times` (rows are time-major).
pub fn sample_run(
    config: &SolverConfig,
    g: &(dyn Fn(f64) -> f64 + Sync),
    reference: Option<&dyn ReferenceSolution>,
    xs: &[f64],
    times: &[f64],
    mode: EvalMode,
) -> Result<SampledRun> {
    let solver = BurgersSolver::new(config.clone())?;
    let wanted = output_steps(times, config.tau, solver.step_count())?;
    let mut states: Vec<(usize, f64, WeakFunction)> = Vec::new();
    let (diagnostics, initial_energy) = solver.run_with(g, |n, t, u| {
        if wanted.contains(&n) {
            states.push((n, t, u.clone()));
        }
    })?;
    let space = solver.space();
    let mut rows = Vec::with_capacity(wanted.len() * xs.len());
    let mut ordered = Vec::with_capacity(wanted.len());
    for (&n, &t) in wanted.iter().zip(times) {
        let (_, _, u) = states.iter().find(|s| s.0 == n).expect("observer saw every step");
        for &x in xs {
            let numerical = space.evaluate(u, x, mode)?;
            let exact = match reference {
                Some(r) if n == 0 => Some(r.initial(x)),
                Some(r) => Some(r.value(x, t)?),
                None => None,
            };
            rows.push(TableRow::new(config.k, config.n_elements, config.nu, t, x, numerical, exact));
        }
        ordered.push((t, u.clone()));
    }
    let trajectory = Trajectory {
        states: Vec::new(),
        times: Vec::new(),
        diagnostics,
        initial_energy,
    };
    Ok(SampledRun {
        rows,
        states: ordered,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub steps: usize,
    pub final_time: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub max_picard_iterations: usize,
    pub mean_picard_iterations: f64,
    pub max_energy_violation: f64,
    pub wall_time_s: f64,
}

impl SolveSummary {
    fn from_diagnostics(diag: &[StepInfo], initial_energy: f64, tau: f64, nu: f64, wall: f64) -> Self {
        let traj = Trajectory {
            states: Vec::new(),
            times: Vec::new(),
            diagnostics: diag.to_vec(),
            initial_energy,
        };
        let total: usize = diag.iter().map(|d| d.picard_iterations).sum();
        Self {
            steps: diag.len(),
            final_time: diag.last().map_or(0.0, |d| d.time),
            initial_energy,
            final_energy: diag.last().map_or(initial_energy, |d| d.energy),
            max_picard_iterations: traj.max_picard_iterations(),
            mean_picard_iterations: if diag.is_empty() { 0.0 } else { total as f64 / diag.len() as f64 },
            max_energy_violation: if diag.is_empty() { 0.0 } else { traj.max_energy_violation(tau, nu) },
            wall_time_s: wall,
        }
    }
}

impl fmt::Display for SolveSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "steps                 {}", self.steps)?;
        writeln!(f, "final time            {}", self.final_time)?;
        writeln!(f, "energy ||U^0||^2      {:.6e} -> {:.6e}", self.initial_energy, self.final_energy)?;
        writeln!(
            f,
            "Picard iterations     max {}, mean {:.3}",
            self.max_picard_iterations, self.mean_picard_iterations
        )?;
        writeln!(f, "max energy violation  {:.3e}", self.max_energy_violation)?;
        write!(f, "wall time             {:.3} s", self.wall_time_s)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub rows: Vec<TableRow>,
    pub states: Vec<(f64, WeakFunction)>,
    pub summary: SolveSummary,
    pub config: SolverConfig,
}

/// `solve`: one trajectory of the configured problem.
pub fn run_solve(cfg: &RunConfig) -> Result<SolveOutcome> {
    let config = cfg.solver_config()?;
    cfg.validate_samples()?;
    let times = cfg.output_times();
    let t_min = times.iter().copied().filter(|&t| t > 0.0).fold(cfg.t_final, f64::min);
    let reference = cfg.reference(t_min)?;
    let g = cfg.initial_condition()?;
    let start = Instant::now();
    let run = sample_run(
        &config,
        &*g,
        reference.as_deref(),
        &cfg.sample_points(),
        &times,
        cfg.sample_mode.into(),
    )?;
    let wall = start.elapsed().as_secs_f64();
    let summary = SolveSummary::from_diagnostics(
        &run.trajectory.diagnostics,
        run.trajectory.initial_energy,
        config.tau,
        config.nu,
        wall,
    );
    Ok(SolveOutcome {
        rows: run.rows,
        states: run.states,
        summary,
        config,
    })
}

/// A fixed run of a table: all `xs` sampled at all `times`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSetting {
    pub k: usize,
    pub n_elements: usize,
    pub nu: f64,
    pub tau: f64,
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
}

/// Settings of the two reference tables (`g = sin(πx)`, `τ = 10⁻⁴`).
pub fn table_settings(which: u8) -> Result<Vec<TableSetting>> {
    let grid = |a: usize, b: usize, m: f64| (a..=b).map(|i| i as f64 / m).collect::<Vec<_>>();
    match which {
        1 => Ok([(0, 80), (1, 80), (0, 128), (1, 128)]
            .into_iter()
            .map(|(k, n)| TableSetting {
                k,
                n_elements: n,
                nu: 0.1,
                tau: 1e-4,
                times: vec![0.1],
                xs: grid(1, 9, 10.0),
            })
            .collect()),
        2 => Ok([0.1, 0.01]
            .into_iter()
            .map(|nu| TableSetting {
                k: 1,
                n_elements: 80,
                nu,
                tau: 1e-4,
                times: vec![0.4, 0.6, 0.8, 1.0],
                xs: grid(1, 3, 4.0),
            })
            .collect()),
        _ => Err(invalid(format!("unknown table {which} (expected 1 or 2)"))),
    }
}

/// `table`: reproduces a reference table. Only sampling, Picard and
/// quadrature settings are taken from `cfg`; settings run in parallel.
pub fn run_table(which: u8, cfg: &RunConfig) -> Result<Vec<TableRow>> {
    let settings = table_settings(which)?;
    let mode: EvalMode = cfg.sample_mode.into();
    let per_setting: Vec<Vec<TableRow>> = settings
        .par_iter()
        .map(|s| {
            let mut c = cfg.clone();
            c.k = s.k;
            c.nu = s.nu;
            c.t_final = *s.times.last().expect("table has times");
            let config = c.solver_config_with(s.n_elements, s.tau);
            let t_min = s.times.iter().copied().fold(f64::INFINITY, f64::min);
            let reference = FourierSolution::adaptive(s.nu, t_min)?;
            let g = |x: f64| (std::f64::consts::PI * x).sin();
            sample_run(&config, &g, Some(&reference), &s.xs, &s.times, mode)
                .map(|r| r.rows)
                .map_err(|e| Error::Mesh {
                    n_elements: s.n_elements,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;
    Ok(per_setting.into_iter().flatten().collect())
}

/// Header for `table` output.
pub fn table_header(which: u8, cfg: &RunConfig) -> Result<String> {
    let mut h = format!("# wg-burgers table {which}\n# problem = example1 (g = sin(pi x))\n");
    for s in table_settings(which)? {
        h.push_str(&format!(
            "# setting k = {}, n_elements = {}, nu = {}, tau = {}, times = {:?}, x = {:?}\n",
            s.k, s.n_elements, s.nu, s.tau, s.times, s.xs
        ));
        h.push_str(&format!(
            "#   quad_assembly = {}, quad_error = {}\n",
            cfg.quad_assembly.unwrap_or(2 * s.k + 2),
            cfg.quad_error.unwrap_or(s.k + 6)
        ));
    }
    h.push_str(&format!(
        "# picard_tol = {}, picard_max = {}\n# sample_mode = {}\n",
        cfg.picard_tol,
        cfg.picard_max,
        match cfg.sample_mode {
            SampleMode::Auto => "auto (node value at mesh nodes, left-element interior value elsewhere)",
            SampleMode::Node => "node",
            SampleMode::Interior => "interior (left element at shared nodes)",
        }
    ));
    h.push_str("# exact = truncated Cole-Hopf series\n");
    Ok(h)
}

/// `converge`: error table over `cfg.mesh_sizes`. A fixed `tau` in the
/// config is used as is; otherwise `τ = min(1e-4, h^{k+1}/20)`.
pub fn run_converge(cfg: &RunConfig) -> Result<ConvergenceTable> {
    let sizes = &cfg.mesh_sizes;
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(invalid(format!("mesh_sizes {sizes:?} is not a halving chain")));
    }
    let reference = cfg
        .reference(cfg.t_final)?
        .ok_or_else(|| invalid("converge needs a problem with a reference solution"))?;
    let study = StudyConfig {
        k: cfg.k,
        nu: cfg.nu,
        t_final: cfg.t_final,
        mesh_sizes: sizes.clone(),
        time_step: cfg.tau.map_or(TimeStep::DEFAULT, TimeStep::Fixed),
        picard_tol: cfg.picard_tol,
        picard_max: cfg.picard_max,
    };
    convergence_study(&*reference, &study)
}

/// Opens `path`, or stdout when `None`.
pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_rows<W: Write>(out: &mut W, format: OutputFormat, header: &str, rows: &[TableRow]) -> Result<()> {
    match format {
        OutputFormat::Csv => output::write_csv(out, header, rows)?,
        OutputFormat::Jsonl => output::write_jsonl(out, header, rows)?,
    }
    Ok(out.flush()?)
}

pub fn write_states<W: Write>(
    out: &mut W,
    format: OutputFormat,
    header: &str,
    nodes: &[f64],
    states: &[(f64, WeakFunction)],
) -> Result<()> {
    let rows: Vec<StateRow> = states
        .iter()
        .flat_map(|(t, u)| StateRow::from_state(*t, nodes, u))
        .collect();
    match format {
        OutputFormat::Csv => output::write_csv(out, header, &rows)?,
        OutputFormat::Jsonl => output::write_jsonl(out, header, &rows)?,
    }
    Ok(out.flush()?)
}

pub fn write_convergence<W: Write>(
    out: &mut W,
    format: OutputFormat,
    header: &str,
    table: &ConvergenceTable,
) -> Result<()> {
    match format {
        OutputFormat::Csv => output::write_convergence_csv(out, header, table)?,
        OutputFormat::Jsonl => output::write_convergence_jsonl(out, header, table)?,
    }
    Ok(out.flush()?)
}
