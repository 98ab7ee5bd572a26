//! Reference solutions checked against independent computations and the
//! reference exact columns.

use std::f64::consts::PI;

use wg_burgers::{pde_residual, FourierSolution, ReferenceSolution, WoodSolution};

/// `I_n(z)` from its power series `Σ (z/2)^{2m+n} / (m! (m+n)!)`.
fn bessel_i(n: usize, z: f64) -> f64 {
    let half = 0.5 * z;
    let mut term = (1..=n).fold(1.0, |acc, j| acc * half / j as f64);
    let mut sum = term;
    for m in 1..500 {
        term *= half * half / (m as f64 * (m + n) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Composite Simpson rule with `intervals` (even) subintervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (f(a) + inner + f(b))
}

#[test]
fn coefficient_ratios_match_modified_bessel_functions() {
    // a_n / a_0 = 2 I_n(z) / I_0(z) with z = 1 / (2πν)
    for nu in [0.5, 0.1, 0.05, 0.01] {
        let f = FourierSolution::adaptive(nu, 0.1).unwrap();
        let a = f.coefficients();
        let z = 1.0 / (2.0 * PI * nu);
        let i0 = bessel_i(0, z);
        for n in 1..12.min(a.len()) {
            let want = 2.0 * bessel_i(n, z) / i0;
            let got = a[n] / a[0];
            assert!((got - want).abs() <= 1e-11 * (1.0 + want.abs()), "nu={nu}, n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn coefficients_match_simpson() {
    // a_1 / a_0 = 2 I_1(z) / I_0(z) exceeds one for both viscosities; the
    // sequence decreases from n = 1 on.
    for (nu, ratio) in [(0.1, 1.235_925_823_2), (0.01, 1.936_112_128_8)] {
        let f = FourierSolution::adaptive(nu, 0.1).unwrap();
        let a = f.coefficients();
        let kernel = |x: f64| (-(1.0 - (PI * x).cos()) / (2.0 * PI * nu)).exp();
        let s0 = simpson(kernel, 0.0, 1.0, 20_000);
        let s1 = 2.0 * simpson(|x| kernel(x) * (PI * x).cos(), 0.0, 1.0, 20_000);
        assert!((a[0] - s0).abs() < 1e-12 && (a[1] - s1).abs() < 1e-12, "nu={nu}");
        assert!((a[1] / a[0] - ratio).abs() < 1e-10, "nu={nu}: {}", a[1] / a[0]);
        assert!(a.windows(2).skip(1).take(15).all(|w| w[1].abs() < w[0].abs()));
    }
}

/// Exact column of the `ν ∈ {0.1, 0.01}` comparison table: (x, t, u(ν=0.1), u(ν=0.01)).
const TABLE2_EXACT: [(f64, f64, f64, f64); 12] = [
    (0.25, 0.4, 0.30889, 0.34191),
    (0.25, 0.6, 0.24074, 0.26896),
    (0.25, 0.8, 0.19568, 0.22148),
    (0.25, 1.0, 0.16256, 0.18819),
    (0.5, 0.4, 0.56963, 0.66071),
    (0.5, 0.6, 0.44721, 0.52942),
    (0.5, 0.8, 0.35924, 0.43914),
    (0.5, 1.0, 0.29192, 0.37442),
    (0.75, 0.4, 0.62544, 0.91026),
    (0.75, 0.6, 0.48721, 0.76724),
    (0.75, 0.8, 0.37392, 0.64740),
    (0.75, 1.0, 0.28747, 0.55605),
];

#[test]
fn series_reproduces_reference_exact_column() {
    let f1 = FourierSolution::adaptive(0.1, 0.4).unwrap();
    let f2 = FourierSolution::adaptive(0.01, 0.4).unwrap();
    for (x, t, u1, u2) in TABLE2_EXACT {
        let (g1, g2) = (f1.eval(x, t).unwrap(), f2.eval(x, t).unwrap());
        assert!((g1 - u1).abs() <= 5e-6, "nu=0.1 ({x}, {t}): {g1}");
        assert!((g2 - u2).abs() <= 5e-6, "nu=0.01 ({x}, {t}): {g2}");
    }
}

#[test]
fn truncation_is_converged() {
    let adaptive = FourierSolution::adaptive(0.01, 0.05).unwrap();
    let long = FourierSolution::with_terms(0.01, adaptive.n_terms() + 60, 1e-13).unwrap();
    for x in [0.1, 0.5, 0.8] {
        let (a, b) = (adaptive.eval(x, 0.05).unwrap(), long.eval(x, 0.05).unwrap());
        assert!((a - b).abs() < 1e-12, "x={x}: {a} vs {b}");
    }
}

#[test]
fn wood_matches_closed_form_and_derivative() {
    let (nu, sigma) = (0.1, 2.0);
    let w = WoodSolution::new(nu, sigma).unwrap();
    // hand evaluation at (0.5, 1): 2νπ e^{-π²ν} / σ
    let e = (-PI * PI * nu).exp();
    assert!((w.eval(0.5, 1.0) - 2.0 * nu * PI * e / sigma).abs() < 1e-15);
    assert!((w.eval(0.5, 1.0) - 0.117_089_620_8).abs() < 1e-10);
    for x in [0.1, 0.3, 0.5, 0.77, 0.95] {
        let d = 1e-5;
        let fd = (w.eval(x + d, 0.7) - w.eval(x - d, 0.7)) / (2.0 * d);
        assert!((w.eval_dx(x, 0.7) - fd).abs() < 1e-8, "x={x}");
        assert!((w.eval(x, 0.0) - w.initial_condition(x)).abs() < 1e-15);
    }
}

#[test]
fn series_derivative_matches_finite_differences() {
    let f = FourierSolution::adaptive(0.05, 0.2).unwrap();
    for x in [0.15, 0.5, 0.85] {
        let d = 1e-5;
        let fd = (f.eval(x + d, 0.3).unwrap() - f.eval(x - d, 0.3).unwrap()) / (2.0 * d);
        assert!((f.eval_dx(x, 0.3).unwrap() - fd).abs() < 1e-7);
    }
}

#[test]
fn both_references_solve_the_pde() {
    let samples: Vec<(f64, f64)> = (1..20)
        .flat_map(|i| [0.05, 0.2, 0.6, 1.0].map(|t| (i as f64 / 20.0, t)))
        .collect();
    let f = FourierSolution::adaptive(0.1, 0.04).unwrap();
    let w = WoodSolution::new(0.1, 2.0).unwrap();
    let rf = pde_residual(|x, t| f.value(x, t), 0.1, &samples, 1e-4).unwrap();
    let rw = pde_residual(|x, t| w.value(x, t), 0.1, &samples, 1e-4).unwrap();
    assert!(rf <= 1e-5 && rw <= 1e-5, "{rf:e} {rw:e}");
    // a perturbed function is not a solution
    let bad = pde_residual(|x, t| Ok(1.01 * w.eval(x, t)), 0.1, &samples, 1e-4).unwrap();
    assert!(bad > 1e-4);
}

#[test]
fn series_starts_from_sine() {
    let f = FourierSolution::adaptive(0.1, 1e-3).unwrap();
    for x in [0.2, 0.5, 0.7] {
        // u(x, t) = sin(πx) + O(t)
        assert!((f.eval(x, 1e-3).unwrap() - (PI * x).sin()).abs() < 5e-3);
        assert_eq!(f.initial(x), (PI * x).sin());
    }
}
