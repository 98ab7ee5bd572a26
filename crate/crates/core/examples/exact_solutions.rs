//! The two reference solutions and their PDE residuals.
//!
//! ```text
//! cargo run --example exact_solutions
//! ```

use wg_burgers::{pde_residual, FourierSolution, ReferenceSolution, WoodSolution};

fn main() -> wg_burgers::Result<()> {
    let f = FourierSolution::adaptive(0.1, 0.05)?;
    println!("Cole–Hopf series, nu = 0.1: {} terms", f.n_terms());
    println!("  a_0 = {:.12}, a_1 = {:.12}", f.coefficients()[0], f.coefficients()[1]);
    for x in [0.25, 0.5, 0.75] {
        println!("  u({x}, 0.1) = {:.6}   u({x}, 0.4) = {:.6}", f.eval(x, 0.1)?, f.eval(x, 0.4)?);
    }

    let w = WoodSolution::new(0.1, 2.0)?;
    println!("\nWood solution, sigma = 2, nu = 0.1");
    for x in [0.25, 0.5, 0.75] {
        println!("  u({x}, 1) = {:.6}   u_x({x}, 1) = {:.6}", w.eval(x, 1.0), w.eval_dx(x, 1.0));
    }

    let samples: Vec<(f64, f64)> = (1..10)
        .flat_map(|i| [0.1, 0.5, 1.0].map(|t| (i as f64 / 10.0, t)))
        .collect();
    let rf = pde_residual(|x, t| f.value(x, t), 0.1, &samples, 1e-4)?;
    let rw = pde_residual(|x, t| w.value(x, t), 0.1, &samples, 1e-4)?;
    println!("\nmax |u_t + u u_x - nu u_xx| (central differences, delta = 1e-4)");
    println!("  series {rf:.2e}, Wood {rw:.2e}");
    Ok(())
}
