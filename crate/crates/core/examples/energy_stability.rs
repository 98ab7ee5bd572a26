//! Tracks `‖U_n^0‖² + 2τν‖d_w U_n‖² ≤ ‖U_{n-1}^0‖²` along a run.
//!
//! ```text
//! cargo run --release --example energy_stability
//! ```

use std::f64::consts::PI;

use wg_burgers::{solve_trajectory, SolverConfig, StoreMode};

fn main() -> wg_burgers::Result<()> {
    // Small ν with a coarse mesh: the front is under-resolved, energy still decays.
    let config = SolverConfig::new(1, 32, 1e-3, 1e-3, 1.0);
    let traj = solve_trajectory(|x| (PI * x).sin(), &config, StoreMode::Final)?;
    println!("   t      ||U^0||^2     Picard");
    for d in traj.diagnostics.iter().step_by(100) {
        println!("{:5.2}  {:.8}  {:3}", d.time, d.energy, d.picard_iterations);
    }
    println!(
        "initial energy {:.8}, max step violation {:.3e}",
        traj.initial_energy,
        traj.max_energy_violation(config.tau, config.nu)
    );
    Ok(())
}
