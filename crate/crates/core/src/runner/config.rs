//! Flat `key = value` run configuration.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{FourierSolution, ReferenceSolution, WoodSolution};
use crate::time_solver::SolverConfig;
use crate::weak_space::NODE_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// `g(x) = sin(πx)`, Cole–Hopf series reference.
    Example1,
    /// Wood initial datum with parameter `σ`, closed-form reference.
    Example2,
    /// `g(x) = Σ_m b_m sin(mπx)` from the `g_sine` key; no reference solution.
    Custom,
}

impl FromStr for Problem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "example1" => Ok(Self::Example1),
            "example2" => Ok(Self::Example2),
            "custom" | "custom-g" => Ok(Self::Custom),
            _ => Err(format!("unknown problem `{s}` (expected example1, example2 or custom)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "jsonl" | "json-lines" => Ok(Self::Jsonl),
            _ => Err(format!("unknown format `{s}` (expected csv or jsonl)")),
        }
    }
}

/// How a numerical value is read at a sample point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    /// Node value when the point is a mesh node, interior value otherwise.
    Auto,
    /// Node value; every sample point must be a mesh node.
    Node,
    /// Interior polynomial, left element at shared nodes.
    Interior,
}

impl FromStr for SampleMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Self::Auto),
            "node" => Ok(Self::Node),
            "interior" => Ok(Self::Interior),
            _ => Err(format!("unknown sample mode `{s}` (expected auto, node or interior)")),
        }
    }
}

/// Everything a `solve` or `converge` run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: usize,
    pub n_elements: usize,
    pub nu: f64,
    /// Required by `solve`; `converge` uses the scaled rule when absent.
    pub tau: Option<f64>,
    pub t_final: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    pub quad_assembly: Option<usize>,
    pub quad_error: Option<usize>,
    pub problem: Problem,
    pub sigma: f64,
    pub g_sine: Vec<f64>,
    /// Defaults to every mesh node.
    pub sample_points: Option<Vec<f64>>,
    pub sample_mode: SampleMode,
    /// Defaults to `[t_final]`.
    pub output_times: Option<Vec<f64>>,
    pub mesh_sizes: Vec<usize>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub dump_state: bool,
    /// Recorded for provenance; the solver is deterministic.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: 1,
            n_elements: 80,
            nu: 0.1,
            tau: None,
            t_final: 1.0,
            picard_tol: 1e-12,
            picard_max: 50,
            quad_assembly: None,
            quad_error: None,
            problem: Problem::Example1,
            sigma: 2.0,
            g_sine: Vec::new(),
            sample_points: None,
            sample_mode: SampleMode::Auto,
            output_times: None,
            mesh_sizes: vec![8, 16, 32, 64, 128],
            output: None,
            format: OutputFormat::Csv,
            dump_state: false,
            seed: 0,
        }
    }
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value
        .split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

fn parse_one<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("`{value}`: {e}"))
}

impl RunConfig {
    /// Parses a config file body over the defaults. Later keys override earlier ones.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Applies every assignment in `text` on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    line: idx + 1,
                    key: line.to_string(),
                    message: "expected `key = value`".into(),
                });
            };
            self.set(key.trim(), value.trim()).map_err(|message| Error::Config {
                line: idx + 1,
                key: key.trim().to_string(),
                message,
            })?;
        }
        Ok(())
    }

    /// Applies a `KEY=VALUE` override (line number 0 in errors).
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| Error::Config {
            line: 0,
            key: assignment.to_string(),
            message: "expected KEY=VALUE".into(),
        })?;
        self.set(key.trim(), value.trim()).map_err(|message| Error::Config {
            line: 0,
            key: key.trim().to_string(),
            message,
        })
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "k" => self.k = parse_one(value)?,
            "n_elements" | "N" => self.n_elements = parse_one(value)?,
            "nu" => self.nu = parse_one(value)?,
            "re" => {
                let re: f64 = parse_one(value)?;
                self.nu = 1.0 / re;
            }
            "tau" => self.tau = Some(parse_one(value)?),
            "t_final" | "T" => self.t_final = parse_one(value)?,
            "picard_tol" => self.picard_tol = parse_one(value)?,
            "picard_max" => self.picard_max = parse_one(value)?,
            "quad_assembly" => self.quad_assembly = Some(parse_one(value)?),
            "quad_error" => self.quad_error = Some(parse_one(value)?),
            "problem" => self.problem = parse_one(value)?,
            "sigma" => self.sigma = parse_one(value)?,
            "g_sine" => self.g_sine = parse_list(value)?,
            "sample_points" => self.sample_points = Some(parse_list(value)?),
            "sample_mode" => self.sample_mode = parse_one(value)?,
            "output_times" => self.output_times = Some(parse_list(value)?),
            "mesh_sizes" => self.mesh_sizes = parse_list(value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => self.format = parse_one(value)?,
            "dump_state" => self.dump_state = parse_one(value)?,
            "seed" => self.seed = parse_one(value)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// The solver configuration for `n_elements` elements and step `tau`.
    pub fn solver_config_with(&self, n_elements: usize, tau: f64) -> SolverConfig {
        let mut c = SolverConfig::new(self.k, n_elements, self.nu, tau, self.t_final);
        c.picard_tol = self.picard_tol;
        c.picard_max = self.picard_max;
        if let Some(q) = self.quad_assembly {
            c.quad_assembly = q;
        }
        if let Some(q) = self.quad_error {
            c.quad_error = q;
        }
        c
    }

    /// Validated solver configuration for `solve`.
    pub fn solver_config(&self) -> Result<SolverConfig> {
        let tau = self.tau.ok_or_else(|| Error::Config {
            line: 0,
            key: "tau".into(),
            message: "time step is required".into(),
        })?;
        let c = self.solver_config_with(self.n_elements, tau);
        c.validate()?;
        Ok(c)
    }

    pub fn output_times(&self) -> Vec<f64> {
        self.output_times.clone().unwrap_or_else(|| vec![self.t_final])
    }

    /// Sample coordinates, defaulting to all nodes of a uniform mesh.
    pub fn sample_points(&self) -> Vec<f64> {
        self.sample_points.clone().unwrap_or_else(|| {
            (0..=self.n_elements).map(|i| i as f64 / self.n_elements as f64).collect()
        })
    }

    /// Initial datum of the selected problem.
    pub fn initial_condition(&self) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
        Ok(match self.problem {
            Problem::Example1 => Box::new(|x: f64| (std::f64::consts::PI * x).sin()),
            Problem::Example2 => {
                let w = WoodSolution::new(self.nu, self.sigma)?;
                Box::new(move |x| w.initial_condition(x))
            }
            Problem::Custom => {
                let b = self.g_sine.clone();
                Box::new(move |x| {
                    b.iter()
                        .enumerate()
                        .map(|(m, bm)| bm * ((m + 1) as f64 * std::f64::consts::PI * x).sin())
                        .sum()
                })
            }
        })
    }

    /// Reference solution valid for `t ≥ t_min`, if the problem has one.
    pub fn reference(&self, t_min: f64) -> Result<Option<Box<dyn ReferenceSolution>>> {
        Ok(match self.problem {
            Problem::Example1 => Some(Box::new(FourierSolution::adaptive(self.nu, t_min)?)),
            Problem::Example2 => Some(Box::new(WoodSolution::new(self.nu, self.sigma)?)),
            Problem::Custom => None,
        })
    }

    /// Checks that node-mode sample points lie on mesh nodes.
    pub fn validate_samples(&self) -> Result<()> {
        if self.sample_mode != SampleMode::Node {
            return Ok(());
        }
        let n = self.n_elements as f64;
        for &x in &self.sample_points() {
            if ((x * n).round() - x * n).abs() > NODE_TOL * n {
                return Err(Error::Config {
                    line: 0,
                    key: "sample_points".into(),
                    message: format!("{x} is not a mesh node (sample_mode = node)"),
                });
            }
        }
        Ok(())
    }

    /// `# key = value` provenance header, one line per field.
    pub fn header(&self, command: &str) -> String {
        let mut out = String::new();
        let json = serde_json::to_value(self).expect("config serializes");
        let _ = writeln!(out, "# wg-burgers {command}");
        if let serde_json::Value::Object(map) = json {
            for (k, v) in map {
                let _ = writeln!(out, "# {k} = {v}");
            }
        }
        let (qa, qe) = (
            self.quad_assembly.unwrap_or(2 * self.k + 2),
            self.quad_error.unwrap_or(self.k + 6),
        );
        let _ = writeln!(out, "# effective quad_assembly = {qa}, quad_error = {qe}");
        if self.tau.is_none() {
            let _ = writeln!(out, "# tau rule = min(1e-4, h^(k+1)/20), shrunk so that T/tau is an integer");
        }
        out
    }
}
