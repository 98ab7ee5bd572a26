//! Assembles one backward-Euler system and solves it with the banded LU.
//!
//! ```text
//! cargo run --example assemble_solve
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use wg_burgers::{build_uniform_mesh, solve_banded, Assembler, WgSpace};

fn main() -> wg_burgers::Result<()> {
    let (k, n, nu, tau) = (1, 16, 0.05, 1e-3);
    let space = Arc::new(WgSpace::new(build_uniform_mesh(n)?, k)?);
    let assembler = Assembler::new(space.clone());
    let prev = space.qh_project(|x| (PI * x).sin());

    let c = assembler.assemble_convection(&prev)?;
    let v = prev.to_dofs();
    println!("DOFs {}, half-bandwidth {}", c.dim(), c.bandwidth());
    println!("(C(w)v, v) = {:.3e}  (skew-symmetric form)", c.form(&v, &v));

    let system = assembler.system(&prev, &prev, nu, tau)?;
    let x = solve_banded(&system)?;
    let ax = system.matrix.apply(&x);
    let resid = ax.iter().zip(&system.rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("one frozen-coefficient step: max residual {resid:.2e}");

    let m = assembler.mass();
    let a = assembler.diffusion();
    println!("(M v, v) = {:.6} = ||v^0||^2 = {:.6}", m.form(&v, &v), space.interior_norm_sq(&prev));
    println!("(A v, v) = {:.6} = ||d_w v||^2 = {:.6}", a.form(&v, &v), space.weak_derivative_norm_sq(&prev));
    Ok(())
}
