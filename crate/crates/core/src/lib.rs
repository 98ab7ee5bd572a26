//! Weak Galerkin finite elements for the 1D viscous Burgers' equation
//!
//! ```text
//! u_t + u u_x − ν u_xx = 0 on (0, 1),   u(0, t) = u(1, t) = 0,   u(x, 0) = g(x)
//! ```
//!
//! Unknowns are weak functions: a degree-`k` polynomial inside each element
//! plus one value per mesh node. Derivatives are replaced by the discrete weak
//! derivative of degree `k + 1`, and the convection term is written in the
//! skew-symmetric form `⅓(u u_x, v) − ⅓(u u, v_x)` so that it drops out of the
//! energy balance. Time stepping is backward Euler, with the nonlinearity
//! resolved by Picard iteration.
//!
//! Module map:
//!
//! * [`mesh`], [`quadrature`], [`legendre`]: meshes, Gauss rules, the Legendre basis
//! * [`weak_space`]: weak functions, weak derivative, `P_h^l` and `Q_h`
//! * [`assembly`], [`banded`]: global forms and the banded LU solver
//! * [`time_solver`]: the fully discrete scheme
//! * [`exact`]: Cole–Hopf series and Wood closed-form reference solutions
//! * [`error_analysis`]: discrete `L²`/`H¹` errors and convergence studies
//! * [`runner`]: the experiment driver behind the `wg-burgers` binary

pub mod assembly;
pub mod banded;
pub mod error;
pub mod error_analysis;
pub mod exact;
pub mod legendre;
pub mod mesh;
pub mod quadrature;
pub mod runner;
pub mod time_solver;
pub mod weak_space;

pub use assembly::{assemble_diffusion, assemble_mass, solve_banded, AssembledSystem, Assembler, GlobalMatrix};
pub use error::{Error, Result};
pub use error_analysis::{
    convergence_study, discrete_h1_error, discrete_l2_error, ConvergenceTable, ErrorReport, StudyConfig,
    TimeStep,
};
pub use exact::{pde_residual, FourierSolution, ReferenceSolution, WoodSolution};
pub use legendre::{legendre_eval, RefPoly};
pub use mesh::{build_uniform_mesh, Mesh};
pub use quadrature::{gauss_rule, QuadratureRule};
pub use time_solver::{solve_trajectory, BurgersSolver, SolverConfig, StoreMode, Trajectory};
pub use weak_space::{l2_project, EvalMode, WeakFunction, WgSpace};
