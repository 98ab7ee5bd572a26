#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wg_burgers::{gauss_rule, legendre_eval, WeakFunction, WgSpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random member of `S_h^0` with entries in `[-1, 1]`.
pub fn random_weak(space: &WgSpace, rng: &mut impl Rng) -> WeakFunction {
    let (k, n) = (space.k(), space.n_elements());
    let interior = (0..n * (k + 1)).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut nodes: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
    nodes[0] = 0.0;
    nodes[n] = 0.0;
    WeakFunction::from_parts(k, interior, nodes).unwrap()
}

/// Evaluates a reference-element Legendre expansion.
pub fn eval_legendre(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().enumerate().map(|(j, c)| c * legendre_eval(j, t)).sum()
}

/// Monomial-basis polynomial `Σ a_j x^j` and its derivative.
pub fn poly(a: &[f64], x: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

pub fn poly_dx(a: &[f64], x: f64) -> f64 {
    a.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (j, c)| acc * x + j as f64 * c)
}

/// Forms evaluated by direct Gauss quadrature on each element, independent
/// of the assembled matrices.
pub struct FormOracle<'a> {
    pub space: &'a WgSpace,
    rule: wg_burgers::QuadratureRule,
}

impl<'a> FormOracle<'a> {
    pub fn new(space: &'a WgSpace) -> Self {
        Self {
            space,
            rule: gauss_rule(3 * space.k() + 6).unwrap(),
        }
    }

    fn element_sum(&self, f: impl Fn(usize, f64) -> f64) -> f64 {
        let mut s = 0.0;
        for e in 0..self.space.n_elements() {
            let h = self.space.mesh().element_size(e);
            for (&t, &w) in self.rule.points.iter().zip(&self.rule.weights) {
                s += 0.5 * h * w * f(e, t);
            }
        }
        s
    }

    pub fn mass(&self, u: &WeakFunction, v: &WeakFunction) -> f64 {
        self.element_sum(|e, t| eval_legendre(u.interior(e), t) * eval_legendre(v.interior(e), t))
    }

    pub fn diffusion(&self, u: &WeakFunction, v: &WeakFunction) -> f64 {
        let du: Vec<_> = (0..self.space.n_elements())
            .map(|e| self.space.weak_derivative(u, e).unwrap())
            .collect();
        let dv: Vec<_> = (0..self.space.n_elements())
            .map(|e| self.space.weak_derivative(v, e).unwrap())
            .collect();
        self.element_sum(|e, t| du[e].eval(t) * dv[e].eval(t))
    }

    /// `⅓(w^0 d_w u, v^0) − ⅓(w^0 u^0, d_w v)`.
    pub fn convection(&self, w: &WeakFunction, u: &WeakFunction, v: &WeakFunction) -> f64 {
        let n = self.space.n_elements();
        let du: Vec<_> = (0..n).map(|e| self.space.weak_derivative(u, e).unwrap()).collect();
        let dv: Vec<_> = (0..n).map(|e| self.space.weak_derivative(v, e).unwrap()).collect();
        self.element_sum(|e, t| {
            let w0 = eval_legendre(w.interior(e), t);
            let u0 = eval_legendre(u.interior(e), t);
            let v0 = eval_legendre(v.interior(e), t);
            (w0 * du[e].eval(t) * v0 - w0 * u0 * dv[e].eval(t)) / 3.0
        })
    }
}

/// Dense LU solve (nalgebra) of a matrix given entry-wise.
pub fn dense_solve(n: usize, entry: impl Fn(usize, usize) -> f64, rhs: &[f64]) -> Option<Vec<f64>> {
    let a = DMatrix::from_fn(n, n, entry);
    let b = DVector::from_column_slice(rhs);
    a.lu().solve(&b).map(|x| x.iter().copied().collect())
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Mesh of `[0, 1]` with element sizes varying by up to a factor of three.
pub fn random_mesh(n: usize, rng: &mut impl Rng) -> wg_burgers::Mesh {
    let sizes: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let total: f64 = sizes.iter().sum();
    let mut nodes = vec![0.0];
    let mut acc = 0.0;
    for s in &sizes[..n - 1] {
        acc += s / total;
        nodes.push(acc);
    }
    nodes.push(1.0);
    wg_burgers::Mesh::from_nodes(nodes).unwrap()
}
