//! Mesh-refinement study on the Wood solution (`σ = 2`, `T = 1`).
//!
//! ```text
//! cargo run --release --example wood_convergence -- [k] [nu]
//! ```

use wg_burgers::{convergence_study, StudyConfig, WoodSolution};

fn main() -> wg_burgers::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(0, |s| s.parse().expect("k"));
    let nu: f64 = args.next().map_or(0.1, |s| s.parse().expect("nu"));
    let exact = WoodSolution::new(nu, 2.0)?;
    let study = StudyConfig::new(k, nu, 1.0, vec![8, 16, 32, 64, 128]);
    let table = convergence_study(&exact, &study)?;
    println!("k = {k}, nu = {nu}");
    println!("   N        tau       L2 error   rate     H1 error   rate");
    for r in &table.rows {
        let rate = |x: Option<f64>| x.map_or("  -  ".to_string(), |v| format!("{v:.3}"));
        println!(
            "{:4}  {:10.3e}  {:10.3e}  {:>5}  {:10.3e}  {:>5}",
            r.n_elements,
            r.tau,
            r.l2_error,
            rate(r.l2_rate),
            r.h1_error,
            rate(r.h1_rate)
        );
    }
    println!(
        "least-squares slopes: L2 {:.3}, H1 {:.3}  (expected k + 1 = {})",
        table.l2_slope.unwrap_or(f64::NAN),
        table.h1_slope.unwrap_or(f64::NAN),
        k + 1
    );
    Ok(())
}
