//! Structural properties of the discretization on random data.

mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use wg_burgers::banded::BandMatrix;
use wg_burgers::{
    build_uniform_mesh, gauss_rule, l2_project, solve_trajectory, Assembler, SolverConfig, StoreMode,
    WeakFunction, WgSpace,
};

fn space(k: usize, n: usize, uniform: bool, seed: u64) -> WgSpace {
    let mesh = if uniform {
        build_uniform_mesh(n).unwrap()
    } else {
        random_mesh(n, &mut rng(seed ^ 0x5eed))
    };
    WgSpace::new(mesh, k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn convection_is_skew_symmetric(k in 0usize..=3, n in 2usize..=10, uniform: bool, seed: u64) {
        let sp = Arc::new(space(k, n, uniform, seed));
        let mut r = rng(seed);
        let w = random_weak(&sp, &mut r);
        let v = random_weak(&sp, &mut r);
        let u = random_weak(&sp, &mut r);
        let c = Assembler::new(sp.clone()).assemble_convection(&w).unwrap();
        let (vd, ud) = (v.to_dofs(), u.to_dofs());
        let scale = FormOracle::new(&sp).convection(&w, &v, &v).abs()
            + max_abs(&c.apply(&vd)) * max_abs(&vd) * vd.len() as f64;
        prop_assert!(c.form(&vd, &vd).abs() <= 1e-13 * scale, "(C v, v) = {:e}", c.form(&vd, &vd));
        let (a, b) = (c.form(&ud, &vd), c.form(&vd, &ud));
        prop_assert!((a + b).abs() <= 1e-13 * (a.abs() + b.abs() + scale));
    }

    #[test]
    fn weak_derivative_satisfies_its_defining_identity(
        k in 0usize..=3, n in 2usize..=8, uniform: bool, seed: u64,
    ) {
        // ∫_e d_w v φ = −∫_e v^0 φ' + v_b φ(b) − v_a φ(a) for every φ ∈ P_{k+1}(e)
        let sp = space(k, n, uniform, seed);
        let mut r = rng(seed);
        let v = random_weak(&sp, &mut r);
        let rule = gauss_rule(k + 4).unwrap();
        for e in 0..n {
            let (a, b) = sp.mesh().element(e);
            let h = b - a;
            let dw = sp.weak_derivative(&v, e).unwrap();
            let phi: Vec<f64> = (0..=k + 1).map(|_| r.random_range(-1.0..1.0)).collect();
            let t_of = |x: f64| (2.0 * x - a - b) / h;
            let lhs = rule.integrate(a, b, |x| dw.eval(t_of(x)) * poly(&phi, x));
            let rhs = -rule.integrate(a, b, |x| eval_legendre(v.interior(e), t_of(x)) * poly_dx(&phi, x))
                + v.node_values()[e + 1] * poly(&phi, b)
                - v.node_values()[e] * poly(&phi, a);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "e={e}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn weak_derivative_is_exact_on_polynomials(k in 0usize..=3, n in 2usize..=8, uniform: bool, seed: u64) {
        let sp = space(k, n, uniform, seed);
        let mut r = rng(seed);
        let a: Vec<f64> = (0..=k).map(|_| r.random_range(-1.0..1.0)).collect();
        let v = sp.qh_project(|x| poly(&a, x));
        for e in 0..n {
            let dw = sp.weak_derivative(&v, e).unwrap();
            let (xa, xb) = sp.mesh().element(e);
            for s in [-1.0, -0.3, 0.4, 1.0] {
                let x = 0.5 * (xa + xb) + 0.5 * s * (xb - xa);
                let want = poly_dx(&a, x);
                prop_assert!((dw.eval(s) - want).abs() <= 1e-11 * (1.0 + want.abs()));
            }
        }
    }

    #[test]
    fn weak_derivative_commutes_with_projection(k in 0usize..=3, n in 2usize..=8, uniform: bool, seed: u64) {
        // u ∈ P_{k+2}: u' ∈ P_{k+1}, so P_h^{k+1} u' = u' and d_w Q_h u must equal it.
        let sp = space(k, n, uniform, seed);
        let mut r = rng(seed);
        let a: Vec<f64> = (0..=k + 2).map(|_| r.random_range(-1.0..1.0)).collect();
        let v = sp.qh_project(|x| poly(&a, x));
        let rule = gauss_rule(k + 6).unwrap();
        for e in 0..n {
            let (xa, xb) = sp.mesh().element(e);
            let dw = sp.weak_derivative(&v, e).unwrap();
            let p = l2_project(|x| poly_dx(&a, x), k + 1, xa, xb, &rule);
            let gap = max_abs_diff(&dw.coeffs, &p.coeffs);
            prop_assert!(gap <= 1e-12 * (1.0 + max_abs(&p.coeffs)), "e={e}: gap {gap:e}");
        }
    }

    #[test]
    fn weak_derivative_is_linear(k in 0usize..=3, n in 2usize..=8, alpha in -3.0f64..3.0, seed: u64) {
        let sp = space(k, n, false, seed);
        let mut r = rng(seed);
        let (u, v) = (random_weak(&sp, &mut r), random_weak(&sp, &mut r));
        let mut w = v.scaled(alpha);
        w.axpy(1.0, &u);
        for e in 0..n {
            let (du, dv, dw) = (
                sp.weak_derivative(&u, e).unwrap(),
                sp.weak_derivative(&v, e).unwrap(),
                sp.weak_derivative(&w, e).unwrap(),
            );
            let combo: Vec<f64> = du.coeffs.iter().zip(&dv.coeffs).map(|(a, b)| a + alpha * b).collect();
            prop_assert!(max_abs_diff(&combo, &dw.coeffs) <= 1e-12 * (1.0 + max_abs(&combo)));
        }
    }

    #[test]
    fn assembled_forms_match_quadrature(k in 0usize..=3, n in 2usize..=8, uniform: bool, seed: u64) {
        let sp = Arc::new(space(k, n, uniform, seed));
        let mut r = rng(seed);
        let (w, u, v) = (random_weak(&sp, &mut r), random_weak(&sp, &mut r), random_weak(&sp, &mut r));
        let asm = Assembler::new(sp.clone());
        let oracle = FormOracle::new(&sp);
        let (ud, vd) = (u.to_dofs(), v.to_dofs());
        let close = |a: f64, b: f64, scale: f64| (a - b).abs() <= 1e-12 * (1.0 + scale);
        let m = oracle.mass(&u, &v);
        prop_assert!(close(asm.mass().form(&ud, &vd), m, m.abs()));
        let d = oracle.diffusion(&u, &v);
        let dscale = oracle.diffusion(&u, &u).sqrt() * oracle.diffusion(&v, &v).sqrt();
        prop_assert!(close(asm.diffusion().form(&ud, &vd), d, dscale));
        let c = oracle.convection(&w, &u, &v);
        let got = asm.assemble_convection(&w).unwrap().form(&ud, &vd);
        prop_assert!(close(got, c, dscale.max(c.abs())), "convection {got} vs {c}");
    }

    #[test]
    fn norms_are_norms(k in 0usize..=3, n in 2usize..=8, alpha in -4.0f64..4.0, seed: u64) {
        let sp = space(k, n, false, seed);
        let mut r = rng(seed);
        let (u, v) = (random_weak(&sp, &mut r), random_weak(&sp, &mut r));
        let mut sum = u.clone();
        sum.axpy(1.0, &v);
        for norm in [
            &(|x: &WeakFunction| sp.full_norm(x)) as &dyn Fn(&WeakFunction) -> f64,
            &|x: &WeakFunction| sp.interior_norm_sq(x).sqrt(),
            &|x: &WeakFunction| sp.weak_derivative_norm_sq(x).sqrt(),
        ] {
            prop_assert!(norm(&u) > 0.0);
            prop_assert!((norm(&u.scaled(alpha)) - alpha.abs() * norm(&u)).abs() <= 1e-12 * (1.0 + norm(&u)));
            prop_assert!(norm(&sum) <= norm(&u) + norm(&v) + 1e-12);
        }
        prop_assert_eq!(sp.full_norm(&sp.zero_function()), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn banded_step_solve_matches_dense(
        k in 0usize..=3, n in 2usize..=12, log_nu in -3.0f64..0.0, log_tau in -5.0f64..-1.0, seed: u64,
    ) {
        let sp = Arc::new(space(k, n, seed % 2 == 0, seed));
        let mut r = rng(seed);
        let w = random_weak(&sp, &mut r).scaled(r.random_range(0.1..20.0));
        let prev = random_weak(&sp, &mut r);
        let sys = Assembler::new(sp.clone())
            .system(&w, &prev, 10f64.powf(log_nu), 10f64.powf(log_tau))
            .unwrap();
        let dim = sys.matrix.dim();
        let x = wg_burgers::solve_banded(&sys).unwrap();
        let y = dense_solve(dim, |i, j| sys.matrix.get(i, j), &sys.rhs).unwrap();
        prop_assert!(max_abs_diff(&x, &y) <= 1e-10 * (1.0 + max_abs(&y)));
    }

    #[test]
    fn banded_lu_matches_dense_on_general_band(
        dim in 1usize..=40, kl in 0usize..=4, ku in 0usize..=4, seed: u64,
    ) {
        // No diagonal dominance: pivoting is exercised.
        let mut r = rng(seed);
        let mut a = BandMatrix::zeros(dim, kl, ku);
        for i in 0..dim {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(dim) {
                a.set(i, j, r.random_range(-1.0..1.0));
            }
        }
        let b: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
        let Some(y) = dense_solve(dim, |i, j| a.get(i, j), &b) else { return Ok(()) };
        let dense = nalgebra::DMatrix::from_fn(dim, dim, |i, j| a.get(i, j));
        let sv = dense.singular_values();
        let cond = sv.max() / sv.min();
        prop_assume!(cond < 1e6);
        let x = a.solve(&b).unwrap();
        prop_assert!(max_abs_diff(&x, &y) <= 1e-10 * (1.0 + max_abs(&y)), "cond {cond:e}");
    }

    #[test]
    fn homogeneous_system_has_only_trivial_solution(
        k in 0usize..=3, n in 2usize..=10, log_nu in -3.0f64..0.0, seed: u64,
    ) {
        let sp = Arc::new(space(k, n, false, seed));
        let mut r = rng(seed);
        let w = random_weak(&sp, &mut r).scaled(10.0);
        let sys = Assembler::new(sp.clone()).system(&w, &sp.zero_function(), 10f64.powf(log_nu), 1e-3).unwrap();
        prop_assert!(sys.rhs.iter().all(|&x| x == 0.0));
        let x = wg_burgers::solve_banded(&sys).unwrap();
        prop_assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn every_step_dissipates_energy(
        k in 0usize..=2, n in 4usize..=16, log_nu in -3.0f64..-0.5, b in prop::collection::vec(-1.0f64..1.0, 1..4),
    ) {
        let nu = 10f64.powf(log_nu);
        let config = SolverConfig::new(k, n, nu, 0.01, 0.1);
        let g = |x: f64| {
            b.iter().enumerate().map(|(m, c)| c * ((m + 1) as f64 * std::f64::consts::PI * x).sin()).sum()
        };
        let traj = solve_trajectory(g, &config, StoreMode::Final).unwrap();
        prop_assert!(traj.max_energy_violation(config.tau, nu) <= 1e-10);
    }
}

#[test]
fn commutation_for_sine_within_quadrature_tolerance() {
    use std::f64::consts::PI;
    for k in 0..=3 {
        for n in [4, 8, 16] {
            let sp = space(k, n, true, 0);
            let v = sp.qh_project(|x| (PI * x).sin());
            let rule = gauss_rule(24).unwrap();
            let mut worst = 0.0f64;
            for e in 0..n {
                let (a, b) = sp.mesh().element(e);
                let dw = sp.weak_derivative(&v, e).unwrap();
                let p = l2_project(|x| PI * (PI * x).cos(), k + 1, a, b, &rule);
                worst = worst.max(max_abs_diff(&dw.coeffs, &p.coeffs));
            }
            assert!(worst <= 1e-12, "k={k}, N={n}: {worst:e}");
        }
    }
}

#[test]
fn dof_layout_round_trips_through_band_ordering() {
    let sp = Arc::new(space(2, 5, true, 0));
    let asm = Assembler::new(sp.clone());
    let map = asm.mass().dof_map();
    let v = random_weak(&sp, &mut rng(7)).to_dofs();
    assert_eq!(map.permute_to_layout(&map.permute_to_band(&v)), v);
    assert_eq!(asm.mass().bandwidth(), 2 + 2);
}
