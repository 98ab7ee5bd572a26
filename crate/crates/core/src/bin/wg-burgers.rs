use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wg_burgers::runner::{self, OutputFormat, Problem, RunConfig, SampleMode};
use wg_burgers::{Error, Result};

/// Weak Galerkin solver for the 1D viscous Burgers' equation.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for independent runs.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Override any config key, e.g. `--set nu=0.01` (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one problem and sample it at the configured points and times.
    Solve {
        /// Also write node values and interior coefficients at each output time.
        #[arg(long)]
        dump_state: bool,
    },
    /// Reproduce a reference comparison table.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long, value_enum)]
        sample_mode: Option<SampleMode>,
    },
    /// Mesh-refinement study against the reference solution.
    Converge {
        #[arg(short)]
        k: Option<usize>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        /// Comma-separated halving chain, e.g. `8,16,32,64,128`.
        #[arg(long, value_name = "LIST")]
        mesh: Option<String>,
        #[arg(long = "t-final", value_name = "T")]
        t_final: Option<f64>,
    },
}

fn load_config(cli: &Cli, base: RunConfig, extra: &[(&str, String)]) -> Result<RunConfig> {
    let mut cfg = base;
    if let Some(path) = &cli.config {
        cfg.apply_text(&std::fs::read_to_string(path)?)?;
    }
    for (key, value) in extra {
        cfg.apply_override(&format!("{key}={value}"))?;
    }
    for o in &cli.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(out) = &cli.out {
        cfg.output = Some(out.clone());
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    Ok(cfg)
}

fn state_path(out: &Path, format: OutputFormat) -> PathBuf {
    let ext = match format {
        OutputFormat::Csv => "state.csv",
        OutputFormat::Jsonl => "state.jsonl",
    };
    out.with_extension(ext)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Solve { dump_state } => {
            let mut cfg = load_config(cli, RunConfig::default(), &[])?;
            cfg.dump_state |= *dump_state;
            let state_out = match (&cfg.output, cfg.dump_state) {
                (Some(p), true) => Some(state_path(p, cfg.format)),
                (None, true) => {
                    return Err(Error::Config {
                        line: 0,
                        key: "dump_state".into(),
                        message: "a state dump needs --out".into(),
                    })
                }
                _ => None,
            };
            let outcome = runner::run_solve(&cfg)?;
            let header = cfg.header("solve");
            let mut out = runner::open_output(cfg.output.as_deref())?;
            runner::write_rows(&mut out, cfg.format, &header, &outcome.rows)?;
            if let Some(path) = state_out {
                let mesh = outcome.config.build_space()?;
                let mut w = runner::open_output(Some(&path))?;
                runner::write_states(&mut w, cfg.format, &header, mesh.mesh().nodes(), &outcome.states)?;
            }
            eprintln!("{}", outcome.summary);
        }
        Command::Table { which, sample_mode } => {
            let mut cfg = load_config(cli, RunConfig::default(), &[])?;
            if let Some(m) = sample_mode {
                cfg.sample_mode = *m;
            }
            let rows = runner::run_table(*which, &cfg)?;
            let header = runner::table_header(*which, &cfg)?;
            let mut out = runner::open_output(cfg.output.as_deref())?;
            runner::write_rows(&mut out, cfg.format, &header, &rows)?;
        }
        Command::Converge {
            k,
            nu,
            sigma,
            mesh,
            t_final,
        } => {
            let base = RunConfig {
                problem: Problem::Example2,
                ..RunConfig::default()
            };
            let mut extra = Vec::new();
            if let Some(v) = k {
                extra.push(("k", v.to_string()));
            }
            if let Some(v) = nu {
                extra.push(("nu", v.to_string()));
            }
            if let Some(v) = sigma {
                extra.push(("sigma", v.to_string()));
            }
            if let Some(v) = mesh {
                extra.push(("mesh_sizes", v.clone()));
            }
            if let Some(v) = t_final {
                extra.push(("t_final", v.to_string()));
            }
            let cfg = load_config(cli, base, &extra)?;
            let table = runner::run_converge(&cfg)?;
            let header = cfg.header("converge");
            let mut out = runner::open_output(cfg.output.as_deref())?;
            runner::write_convergence(&mut out, cfg.format, &header, &table)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
