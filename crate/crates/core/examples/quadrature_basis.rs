//! Gauss–Legendre rules and the Legendre basis on a uniform mesh.
//!
//! ```text
//! cargo run --example quadrature_basis
//! ```

use wg_burgers::legendre::{legendre_eval_with_derivative, legendre_norm_sq};
use wg_burgers::{build_uniform_mesh, gauss_rule};

fn main() -> wg_burgers::Result<()> {
    println!("n  exact degree  ∫_0^1 x^(2n-1) dx error");
    for n in [1, 2, 4, 8, 16] {
        let rule = gauss_rule(n)?;
        let p = 2 * n - 1;
        let approx = rule.integrate(0.0, 1.0, |x| x.powi(p as i32));
        println!("{n:<2} {:<13} {:.2e}", rule.exact_degree(), (approx - 1.0 / (p + 1) as f64).abs());
    }

    let rule = gauss_rule(6)?;
    println!("\nGram matrix ∫P_i P_j on [-1, 1] (expect diag 2/(2i+1)):");
    for i in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|j| {
                let g = rule.integrate_ref(|t| {
                    legendre_eval_with_derivative(i, t).0 * legendre_eval_with_derivative(j, t).0
                });
                format!("{g:8.5}")
            })
            .collect();
        println!("  {}   (2/(2i+1) = {:.5})", row.join(" "), legendre_norm_sq(i));
    }

    let mesh = build_uniform_mesh(4)?;
    println!("\nmesh nodes {:?}, h = {}", mesh.nodes(), mesh.h());
    for e in 0..mesh.n_elements() {
        let (x, jac) = mesh.map_to_element(e, 0.0)?;
        println!("  element {e}: midpoint {x:.3}, jacobian {jac}");
    }
    Ok(())
}
