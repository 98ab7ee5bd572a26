//! Discrete weak derivative and the commutation `d_w Q_h u = P_h^{k+1} u'`.
//!
//! ```text
//! cargo run --example weak_derivative
//! ```

use std::f64::consts::PI;

use wg_burgers::{build_uniform_mesh, l2_project, WgSpace};

fn main() -> wg_burgers::Result<()> {
    for k in 0..=2 {
        let space = WgSpace::new(build_uniform_mesh(8)?, k)?;
        let u = |x: f64| (PI * x).sin();
        let du = |x: f64| PI * (PI * x).cos();
        let v = space.qh_project(u);
        let mut worst = 0.0f64;
        for e in 0..space.n_elements() {
            let (a, b) = space.mesh().element(e);
            let dw = space.weak_derivative(&v, e)?;
            let p = l2_project(du, space.r(), a, b, space.error_rule());
            for (x, y) in dw.coeffs.iter().zip(&p.coeffs) {
                worst = worst.max((x - y).abs());
            }
        }
        println!("k = {k}: max |d_w Q_h u - P_h^r u'| coefficient gap = {worst:.2e}");
    }

    // A cubic is reproduced exactly once r = k + 1 >= 2.
    let space = WgSpace::new(build_uniform_mesh(5)?, 2)?;
    let v = space.qh_project(|x| x * x * x - x);
    let dw = space.weak_derivative(&v, 3)?;
    let (a, b) = space.mesh().element(3);
    let x = 0.5 * (a + b) + 0.1 * (b - a);
    let t = space.mesh().to_reference(3, x);
    println!("\nu = x^3 - x on element 3: d_w u({x:.3}) = {:.15}, u'({x:.3}) = {:.15}", dw.eval(t), 3.0 * x * x - 1.0);
    Ok(())
}
