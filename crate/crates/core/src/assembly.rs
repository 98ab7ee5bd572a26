//! Assembly of the discrete mass, diffusion and skew-symmetrized convection
//! forms into banded global matrices.
//!
//! Global vectors use the `S_h^0` DOF layout of [`WeakFunction::to_dofs`].
//! Internally the matrix rows are ordered element by element
//! (`node_e, c_{e,0}, …, c_{e,k}`) so that the one-element coupling stencil
//! gives half-bandwidth `k + 2`.

use std::sync::Arc;

use crate::banded::BandMatrix;
use crate::error::{invalid, Result};
use crate::legendre::{legendre_norm_sq, legendre_values};
use crate::weak_space::{dof_count, WeakFunction, WgSpace};

/// Maps between the DOF layout and the banded row ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    k: usize,
    n_elements: usize,
    to_band: Vec<usize>,
    to_layout: Vec<usize>,
    element_rows: Vec<Option<usize>>,
}

impl DofMap {
    pub fn new(k: usize, n_elements: usize) -> Self {
        let n = dof_count(k, n_elements);
        let n_int = n_elements * (k + 1);
        let mut to_band = vec![0; n];
        for e in 0..n_elements {
            for j in 0..=k {
                to_band[e * (k + 1) + j] = band_coeff(k, e, j);
            }
        }
        for i in 1..n_elements {
            to_band[n_int + i - 1] = band_node(k, i);
        }
        let mut to_layout = vec![0; n];
        for (l, &b) in to_band.iter().enumerate() {
            to_layout[b] = l;
        }
        let element_rows = (0..n_elements)
            .flat_map(|e| {
                (0..=k)
                    .map(move |j| Some(band_coeff(k, e, j)))
                    .chain([
                        (e >= 1).then(|| band_node(k, e)),
                        (e + 1 < n_elements).then(|| band_node(k, e + 1)),
                    ])
            })
            .collect();
        Self {
            k,
            n_elements,
            to_band,
            to_layout,
            element_rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.to_band.len()
    }

    pub fn half_bandwidth(&self) -> usize {
        self.k + 2
    }

    /// Band rows of element `e`'s local data `[c_0..c_k, v^a, v^b]`;
    /// boundary nodes are `None`.
    pub fn element_rows(&self, e: usize) -> &[Option<usize>] {
        let n = self.k + 3;
        &self.element_rows[e * n..(e + 1) * n]
    }

    pub fn permute_to_band(&self, layout: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; layout.len()];
        for (l, &b) in self.to_band.iter().enumerate() {
            out[b] = layout[l];
        }
        out
    }

    pub fn permute_to_layout(&self, band: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; band.len()];
        for (b, &l) in self.to_layout.iter().enumerate() {
            out[l] = band[b];
        }
        out
    }
}

fn band_coeff(k: usize, e: usize, j: usize) -> usize {
    if e == 0 {
        j
    } else {
        band_node(k, e) + 1 + j
    }
}

fn band_node(k: usize, i: usize) -> usize {
    (k + 1) + (i - 1) * (k + 2)
}

/// A global operator on `S_h^0` in banded storage.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalMatrix {
    map: Arc<DofMap>,
    band: BandMatrix,
}

impl GlobalMatrix {
    pub fn zeros(map: Arc<DofMap>) -> Self {
        let b = map.half_bandwidth();
        let band = BandMatrix::zeros(map.dim(), b, b);
        Self { map, band }
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn bandwidth(&self) -> usize {
        self.map.half_bandwidth()
    }

    pub fn dof_map(&self) -> &DofMap {
        &self.map
    }

    pub fn band(&self) -> &BandMatrix {
        &self.band
    }

    /// Entry at DOF-layout indices.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.band.get(self.map.to_band[row], self.map.to_band[col])
    }

    /// `y = A x` in DOF layout.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let y = self.band.matvec(&self.map.permute_to_band(x));
        self.map.permute_to_layout(&y)
    }

    /// Bilinear form `(A u, v) = vᵀ A u`.
    pub fn form(&self, u: &[f64], v: &[f64]) -> f64 {
        self.apply(u).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `self ← alpha · self + beta · other`.
    pub fn combine(&mut self, alpha: f64, beta: f64, other: &GlobalMatrix) {
        self.band.combine(alpha, beta, &other.band);
    }

    fn scatter(&mut self, e: usize, local: &[f64], n: usize) {
        let rows = self.map.element_rows(e);
        for (a, ra) in rows.iter().enumerate() {
            let Some(ra) = ra else { continue };
            for (b, rb) in rows.iter().enumerate() {
                let Some(rb) = rb else { continue };
                self.band.add(*ra, *rb, local[a * n + b]);
            }
        }
    }

    /// Solves `A x = rhs` (DOF layout) by banded LU with partial pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.dim() {
            return Err(invalid(format!(
                "rhs length {} does not match dimension {}",
                rhs.len(),
                self.dim()
            )));
        }
        let x = self.band.solve(&self.map.permute_to_band(rhs))?;
        Ok(self.map.permute_to_layout(&x))
    }
}

/// `(u^0, v^0)_h`. Diagonal with entries `h_i / (2j + 1)` on interior DOFs.
pub fn assemble_mass(space: &WgSpace) -> GlobalMatrix {
    let map = Arc::new(DofMap::new(space.k(), space.n_elements()));
    assemble_mass_with(space, map)
}

fn assemble_mass_with(space: &WgSpace, map: Arc<DofMap>) -> GlobalMatrix {
    let n = space.k() + 3;
    let mut m = GlobalMatrix::zeros(map);
    let mut local = vec![0.0; n * n];
    for e in 0..space.n_elements() {
        let h = space.mesh().element_size(e);
        local.iter_mut().for_each(|x| *x = 0.0);
        for j in 0..=space.k() {
            local[j * n + j] = 0.5 * h * legendre_norm_sq(j);
        }
        m.scatter(e, &local, n);
    }
    m
}

/// `(d_{w,r} u, d_{w,r} v)_h`.
pub fn assemble_diffusion(space: &WgSpace) -> GlobalMatrix {
    let map = Arc::new(DofMap::new(space.k(), space.n_elements()));
    assemble_diffusion_with(space, map)
}

fn assemble_diffusion_with(space: &WgSpace, map: Arc<DofMap>) -> GlobalMatrix {
    let n = space.k() + 3;
    let r = space.r();
    let mut a = GlobalMatrix::zeros(map);
    let mut local = vec![0.0; n * n];
    for e in 0..space.n_elements() {
        let h = space.mesh().element_size(e);
        let op = space.deriv_op(e);
        for p in 0..n {
            for q in 0..n {
                local[p * n + q] = (0..=r)
                    .map(|m| 0.5 * h * legendre_norm_sq(m) * op.get(m, p) * op.get(m, q))
                    .sum();
            }
        }
        a.scatter(e, &local, n);
    }
    a
}

/// Reference triple products `∫ P_m P_l P_i` for `m ≤ k+1`, `l, i ≤ k`.
#[derive(Debug, Clone)]
struct TripleProducts {
    k: usize,
    data: Vec<f64>,
}

impl TripleProducts {
    fn new(space: &WgSpace) -> Self {
        let k = space.k();
        let r = k + 1;
        let mut data = vec![0.0; (r + 1) * (k + 1) * (k + 1)];
        let mut vals = vec![0.0; r + 1];
        let rule = space.assembly_rule();
        for (&t, &w) in rule.points.iter().zip(&rule.weights) {
            legendre_values(t, &mut vals);
            for m in 0..=r {
                for l in 0..=k {
                    for i in 0..=k {
                        data[(m * (k + 1) + l) * (k + 1) + i] += w * vals[m] * vals[l] * vals[i];
                    }
                }
            }
        }
        Self { k, data }
    }

    #[inline]
    fn get(&self, m: usize, l: usize, i: usize) -> f64 {
        self.data[(m * (self.k + 1) + l) * (self.k + 1) + i]
    }
}

/// Caches the mass and diffusion matrices of a space and assembles the
/// frozen-coefficient convection operator
/// `(C(w) u, v) = ⅓(w^0 d_{w,r}u, v^0)_h − ⅓(w^0 u^0, d_{w,r}v)_h`.
#[derive(Debug, Clone)]
pub struct Assembler {
    space: Arc<WgSpace>,
    map: Arc<DofMap>,
    mass: GlobalMatrix,
    diffusion: GlobalMatrix,
    triples: TripleProducts,
}

impl Assembler {
    pub fn new(space: Arc<WgSpace>) -> Self {
        let map = Arc::new(DofMap::new(space.k(), space.n_elements()));
        let mass = assemble_mass_with(&space, map.clone());
        let diffusion = assemble_diffusion_with(&space, map.clone());
        let triples = TripleProducts::new(&space);
        Self {
            space,
            map,
            mass,
            diffusion,
            triples,
        }
    }

    pub fn space(&self) -> &WgSpace {
        &self.space
    }

    pub fn mass(&self) -> &GlobalMatrix {
        &self.mass
    }

    pub fn diffusion(&self) -> &GlobalMatrix {
        &self.diffusion
    }

    pub fn assemble_convection(&self, w: &WeakFunction) -> Result<GlobalMatrix> {
        let mut c = GlobalMatrix::zeros(self.map.clone());
        self.add_convection(w, 1.0, &mut c)?;
        Ok(c)
    }

    /// `target ← target + scale · C(w)`.
    pub fn add_convection(&self, w: &WeakFunction, scale: f64, target: &mut GlobalMatrix) -> Result<()> {
        let space = &*self.space;
        let k = space.k();
        if w.k() != k || w.n_elements() != space.n_elements() {
            return Err(invalid("convection coefficient does not belong to the space"));
        }
        let r = k + 1;
        let n = k + 3;
        let mut b = vec![0.0; (r + 1) * (k + 1)];
        let mut nmat = vec![0.0; (k + 1) * n];
        let mut local = vec![0.0; n * n];
        for e in 0..space.n_elements() {
            let wc = w.interior(e);
            if wc.iter().all(|&x| x == 0.0) {
                continue;
            }
            let h = space.mesh().element_size(e);
            let op = space.deriv_op(e);
            // B[m][i] = ∫ w^0 P_m P_i on the reference element
            for m in 0..=r {
                for i in 0..=k {
                    b[m * (k + 1) + i] = (0..=k).map(|l| wc[l] * self.triples.get(m, l, i)).sum();
                }
            }
            // N[i][col] = (h/6) Σ_m B[m][i] D[m][col]
            let factor = scale * h / 6.0;
            for i in 0..=k {
                for col in 0..n {
                    nmat[i * n + col] = factor * (0..=r).map(|m| b[m * (k + 1) + i] * op.get(m, col)).sum::<f64>();
                }
            }
            // local = N (rows on interior) − Nᵀ
            local.iter_mut().for_each(|x| *x = 0.0);
            for i in 0..=k {
                for col in 0..n {
                    let v = nmat[i * n + col];
                    local[i * n + col] += v;
                    local[col * n + i] -= v;
                }
            }
            target.scatter(e, &local, n);
        }
        Ok(())
    }

    /// `(1/τ) M + ν A`, the part of the step matrix that does not change
    /// between Picard iterations.
    pub fn linear_part(&self, nu: f64, tau: f64) -> GlobalMatrix {
        let mut matrix = self.mass.clone();
        matrix.combine(1.0 / tau, nu, &self.diffusion);
        matrix
    }

    /// `(1/τ) M u_prev`.
    pub fn step_rhs(&self, prev: &WeakFunction, tau: f64) -> Vec<f64> {
        self.mass.apply(&prev.to_dofs()).into_iter().map(|x| x / tau).collect()
    }

    /// The Picard system `((1/τ) M + ν A + C(w)) u = (1/τ) M u_prev`.
    pub fn system(&self, w: &WeakFunction, prev: &WeakFunction, nu: f64, tau: f64) -> Result<AssembledSystem> {
        let mut matrix = self.linear_part(nu, tau);
        self.add_convection(w, 1.0, &mut matrix)?;
        let rhs = self.step_rhs(prev, tau);
        Ok(AssembledSystem { matrix, rhs, nu, tau })
    }
}

/// A linearized backward-Euler system ready for [`solve_banded`].
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub matrix: GlobalMatrix,
    pub rhs: Vec<f64>,
    pub nu: f64,
    pub tau: f64,
}

/// Solves an assembled system, returning the solution in DOF layout.
pub fn solve_banded(system: &AssembledSystem) -> Result<Vec<f64>> {
    system.matrix.solve(&system.rhs)
}
