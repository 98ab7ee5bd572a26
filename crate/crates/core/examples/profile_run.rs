//! Solution profiles of `g = sin(πx)` at several times from a config string,
//! written as CSV (`k = 1, N = 80, ν = 0.01`).
//!
//! ```text
//! cargo run --release --example profile_run [tau]
//! ```

use std::io;

use wg_burgers::runner::{run_solve, write_rows, RunConfig};

fn main() -> wg_burgers::Result<()> {
    let tau = std::env::args().nth(1).unwrap_or_else(|| "1e-4".into());
    let text = format!(
        "problem = example1\nk = 1\nn_elements = 80\nnu = 0.01\ntau = {tau}\nT = 2\n\
         output_times = 0.2, 0.6, 1.0, 2.0\nsample_points = 0, 0.25, 0.5, 0.75, 0.9, 1\n"
    );
    let cfg = RunConfig::parse(&text)?;
    let outcome = run_solve(&cfg)?;
    write_rows(&mut io::stdout().lock(), cfg.format, &cfg.header("solve"), &outcome.rows)?;
    eprintln!("{}", outcome.summary);
    Ok(())
}
