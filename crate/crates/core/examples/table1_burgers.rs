//! Reproduces the `ν = 0.1, t = 0.1` comparison table for `g = sin(πx)`.
//!
//! ```text
//! cargo run --release --example table1_burgers [auto|interior]
//! ```

use wg_burgers::runner::{run_table, RunConfig, SampleMode};

fn main() -> wg_burgers::Result<()> {
    let mode = match std::env::args().nth(1).as_deref() {
        Some("interior") => SampleMode::Interior,
        _ => SampleMode::Auto,
    };
    let cfg = RunConfig {
        sample_mode: mode,
        ..RunConfig::default()
    };
    let rows = run_table(1, &cfg)?;
    let settings: Vec<(usize, usize)> = {
        let mut s: Vec<_> = rows.iter().map(|r| (r.k, r.n_elements)).collect();
        s.dedup();
        s
    };
    print!("  x  ");
    for (k, n) in &settings {
        print!("  k={k},N={n:<4}");
    }
    println!("    exact");
    for (i, x) in (1..=9).map(|i| i as f64 / 10.0).enumerate() {
        print!("{x:.1}  ");
        for j in 0..settings.len() {
            print!("  {:.5}     ", rows[j * 9 + i].numerical);
        }
        println!("  {:.5}", rows[i].exact.unwrap());
    }
    Ok(())
}
