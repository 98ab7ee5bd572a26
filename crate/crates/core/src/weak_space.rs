//! Weak functions on a mesh, the discrete weak derivative and the
//! projections `P_h^l` and `Q_h`.
//!
//! A weak function stores, per element, the Legendre coefficients of its
//! interior polynomial (degree `k`) and, per mesh node, one scalar value.
//! Storing one value per node makes every weak function single-valued at
//! interior nodes. The weak derivative maps onto polynomials of degree
//! `r = k + 1`.

use crate::error::{invalid, Result};
use crate::legendre::{legendre_norm_sq, legendre_values, legendre_values_and_derivatives, RefPoly};
use crate::mesh::Mesh;
use crate::quadrature::{gauss_rule, QuadratureRule};

/// Tolerance for matching a coordinate to a mesh node.
pub const NODE_TOL: f64 = 1e-12;

/// A weak function `{v^0, v^1..v^N}` in `S_h` (or `S_h^0` when both boundary
/// node values vanish).
#[derive(Debug, Clone, PartialEq)]
pub struct WeakFunction {
    k: usize,
    /// Interior Legendre coefficients, element-major, `k + 1` per element.
    interior: Vec<f64>,
    /// One value per mesh node, boundaries included.
    node_values: Vec<f64>,
}

impl WeakFunction {
    pub fn zeros(k: usize, n_elements: usize) -> Self {
        Self {
            k,
            interior: vec![0.0; n_elements * (k + 1)],
            node_values: vec![0.0; n_elements + 1],
        }
    }

    pub fn from_parts(k: usize, interior: Vec<f64>, node_values: Vec<f64>) -> Result<Self> {
        let n_el = node_values.len().saturating_sub(1);
        if n_el == 0 || interior.len() != n_el * (k + 1) {
            return Err(invalid(format!(
                "weak function parts mismatch: {} interior coefficients for {} nodes at k = {k}",
                interior.len(),
                node_values.len()
            )));
        }
        Ok(Self {
            k,
            interior,
            node_values,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_elements(&self) -> usize {
        self.node_values.len() - 1
    }

    /// Interior coefficients of element `e`.
    pub fn interior(&self, e: usize) -> &[f64] {
        let n = self.k + 1;
        &self.interior[e * n..(e + 1) * n]
    }

    pub fn interior_mut(&mut self, e: usize) -> &mut [f64] {
        let n = self.k + 1;
        &mut self.interior[e * n..(e + 1) * n]
    }

    pub fn interior_poly(&self, e: usize) -> RefPoly {
        RefPoly::new(self.interior(e).to_vec())
    }

    pub fn interior_coeffs(&self) -> &[f64] {
        &self.interior
    }

    pub fn node_values(&self) -> &[f64] {
        &self.node_values
    }

    pub fn node_values_mut(&mut self) -> &mut [f64] {
        &mut self.node_values
    }

    /// Writes `[c_0..c_k, v^a, v^b]` for element `e` into `out`.
    pub fn local_data(&self, e: usize, out: &mut [f64]) {
        let n = self.k + 1;
        out[..n].copy_from_slice(self.interior(e));
        out[n] = self.node_values[e];
        out[n + 1] = self.node_values[e + 1];
    }

    /// Membership in `S_h^0`: both boundary node values are exactly zero.
    pub fn is_homogeneous(&self) -> bool {
        self.node_values[0] == 0.0 && self.node_values[self.n_elements()] == 0.0
    }

    /// `self ← self + alpha · other`.
    pub fn axpy(&mut self, alpha: f64, other: &WeakFunction) {
        assert_eq!(self.interior.len(), other.interior.len());
        for (a, b) in self.interior.iter_mut().zip(&other.interior) {
            *a += alpha * b;
        }
        for (a, b) in self.node_values.iter_mut().zip(&other.node_values) {
            *a += alpha * b;
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.interior.iter_mut().for_each(|c| *c *= alpha);
        out.node_values.iter_mut().for_each(|c| *c *= alpha);
        out
    }

    /// Global `S_h^0` DOF vector: interior coefficients (element-major)
    /// followed by the interior node values `x_2..x_{N-1}`.
    pub fn to_dofs(&self) -> Vec<f64> {
        let n_el = self.n_elements();
        let mut out = Vec::with_capacity(self.interior.len() + n_el - 1);
        out.extend_from_slice(&self.interior);
        out.extend_from_slice(&self.node_values[1..n_el]);
        out
    }

    /// Inverse of [`to_dofs`](Self::to_dofs); boundary node values are set to zero.
    pub fn from_dofs(k: usize, n_elements: usize, dofs: &[f64]) -> Result<Self> {
        let n_int = n_elements * (k + 1);
        if dofs.len() != dof_count(k, n_elements) {
            return Err(invalid(format!(
                "DOF vector has length {}, expected {}",
                dofs.len(),
                dof_count(k, n_elements)
            )));
        }
        let mut node_values = vec![0.0; n_elements + 1];
        node_values[1..n_elements].copy_from_slice(&dofs[n_int..]);
        Ok(Self {
            k,
            interior: dofs[..n_int].to_vec(),
            node_values,
        })
    }
}

/// Number of `S_h^0` unknowns: `(N−1)(k+1) + (N−2)` with `N` nodes.
pub fn dof_count(k: usize, n_elements: usize) -> usize {
    n_elements * (k + 1) + n_elements - 1
}

/// Per-element linear map from `[c_0..c_k, v^a, v^b]` to the Legendre
/// coefficients of `d_{w,r} v`, stored row-major `(r+1) × (k+3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementWeakDerivOp {
    k: usize,
    matrix: Vec<f64>,
}

impl ElementWeakDerivOp {
    /// Builds the operator for an element of length `h`.
    ///
    /// Testing against `q = P_m` and using the diagonal Legendre Gram matrix,
    /// `d_m = (2m+1)/h · (−Σ_j c_j ∫P_j P_m' + v^b − (−1)^m v^a)`.
    pub fn new(k: usize, h: f64, stiffness: &[f64]) -> Self {
        let r = k + 1;
        let cols = k + 3;
        let mut matrix = vec![0.0; (r + 1) * cols];
        for m in 0..=r {
            let scale = (2 * m + 1) as f64 / h;
            let row = &mut matrix[m * cols..(m + 1) * cols];
            for j in 0..=k {
                row[j] = -scale * stiffness[j * (r + 1) + m];
            }
            row[k + 1] = if m % 2 == 0 { -scale } else { scale };
            row[k + 2] = scale;
        }
        Self { k, matrix }
    }

    pub fn rows(&self) -> usize {
        self.k + 2
    }

    pub fn cols(&self) -> usize {
        self.k + 3
    }

    #[inline]
    pub fn get(&self, m: usize, col: usize) -> f64 {
        self.matrix[m * (self.k + 3) + col]
    }

    pub fn apply(&self, local: &[f64], out: &mut [f64]) {
        let cols = self.cols();
        for (m, o) in out.iter_mut().enumerate().take(self.rows()) {
            *o = self.matrix[m * cols..(m + 1) * cols]
                .iter()
                .zip(local)
                .map(|(a, b)| a * b)
                .sum();
        }
    }
}

/// A weak Galerkin discretization: mesh, interior degree `k`, precomputed
/// weak-derivative operators and quadrature rules.
#[derive(Debug, Clone)]
pub struct WgSpace {
    mesh: Mesh,
    k: usize,
    deriv_ops: Vec<ElementWeakDerivOp>,
    assembly_rule: QuadratureRule,
    error_rule: QuadratureRule,
}

impl WgSpace {
    /// Default quadrature: `2k + 2` points for assembly, `k + 6` for
    /// projections and error norms.
    pub fn new(mesh: Mesh, k: usize) -> Result<Self> {
        Self::with_quadrature(mesh, k, 2 * k + 2, k + 6)
    }

    pub fn with_quadrature(
        mesh: Mesh,
        k: usize,
        assembly_points: usize,
        error_points: usize,
    ) -> Result<Self> {
        if assembly_points < 2 * k + 2 {
            return Err(invalid(format!(
                "assembly quadrature needs at least {} points for k = {k}",
                2 * k + 2
            )));
        }
        let assembly_rule = gauss_rule(assembly_points)?;
        let error_rule = gauss_rule(error_points)?;
        let stiffness = reference_stiffness(k, &assembly_rule);
        let deriv_ops = mesh
            .element_sizes()
            .iter()
            .map(|&h| ElementWeakDerivOp::new(k, h, &stiffness))
            .collect();
        Ok(Self {
            mesh,
            k,
            deriv_ops,
            assembly_rule,
            error_rule,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Weak-derivative degree `r = k + 1`.
    pub fn r(&self) -> usize {
        self.k + 1
    }

    pub fn n_elements(&self) -> usize {
        self.mesh.n_elements()
    }

    pub fn dof_count(&self) -> usize {
        dof_count(self.k, self.n_elements())
    }

    pub fn deriv_op(&self, e: usize) -> &ElementWeakDerivOp {
        &self.deriv_ops[e]
    }

    pub fn assembly_rule(&self) -> &QuadratureRule {
        &self.assembly_rule
    }

    pub fn error_rule(&self) -> &QuadratureRule {
        &self.error_rule
    }

    pub fn zero_function(&self) -> WeakFunction {
        WeakFunction::zeros(self.k, self.n_elements())
    }

    fn check_compatible(&self, v: &WeakFunction) -> Result<()> {
        if v.k != self.k || v.n_elements() != self.n_elements() {
            return Err(invalid(format!(
                "weak function (k = {}, {} elements) does not belong to space (k = {}, {} elements)",
                v.k,
                v.n_elements(),
                self.k,
                self.n_elements()
            )));
        }
        Ok(())
    }

    /// `d_{w,r} v` on element `e`, as a Legendre polynomial in the element's
    /// reference coordinate.
    pub fn weak_derivative(&self, v: &WeakFunction, e: usize) -> Result<RefPoly> {
        self.check_compatible(v)?;
        if e >= self.n_elements() {
            return Err(invalid(format!("element index {e} out of range")));
        }
        Ok(self.weak_derivative_unchecked(v, e))
    }

    pub(crate) fn weak_derivative_unchecked(&self, v: &WeakFunction, e: usize) -> RefPoly {
        let mut local = vec![0.0; self.k + 3];
        v.local_data(e, &mut local);
        let mut out = vec![0.0; self.k + 2];
        self.deriv_ops[e].apply(&local, &mut out);
        RefPoly::new(out)
    }

    /// `Q_h u`: local `L²` projection onto `P_k` in each interior plus nodal
    /// interpolation.
    pub fn qh_project(&self, u: impl Fn(f64) -> f64) -> WeakFunction {
        let mut out = self.zero_function();
        for e in 0..self.n_elements() {
            let (a, b) = self.mesh.element(e);
            let p = l2_project(&u, self.k, a, b, &self.error_rule);
            out.interior_mut(e).copy_from_slice(&p.coeffs);
        }
        for (v, &x) in out.node_values.iter_mut().zip(self.mesh.nodes()) {
            *v = u(x);
        }
        out
    }

    /// Interior (`v^0`) value at `x`; points within [`NODE_TOL`] of a shared
    /// node use the left element's right end.
    pub fn evaluate_interior(&self, v: &WeakFunction, x: f64) -> Result<f64> {
        let (e, t) = match self.mesh.node_index(x, NODE_TOL) {
            Some(0) => (0, -1.0),
            Some(i) => (i - 1, 1.0),
            None => {
                let e = self
                    .mesh
                    .locate(x)
                    .ok_or_else(|| invalid(format!("x = {x} outside [0, 1]")))?;
                (e, self.mesh.to_reference(e, x).clamp(-1.0, 1.0))
            }
        };
        Ok(RefPoly::new(v.interior(e).to_vec()).eval(t))
    }

    /// Stored node value at the node coinciding with `x`.
    pub fn evaluate_node(&self, v: &WeakFunction, x: f64) -> Result<f64> {
        let i = self
            .mesh
            .node_index(x, NODE_TOL)
            .ok_or_else(|| invalid(format!("x = {x} is not a mesh node")))?;
        Ok(v.node_values[i])
    }

    pub fn evaluate(&self, v: &WeakFunction, x: f64, mode: EvalMode) -> Result<f64> {
        self.check_compatible(v)?;
        match mode {
            EvalMode::Interior => self.evaluate_interior(v, x),
            EvalMode::Node => self.evaluate_node(v, x),
            EvalMode::Auto => match self.mesh.node_index(x, NODE_TOL) {
                Some(i) => Ok(v.node_values[i]),
                None => self.evaluate_interior(v, x),
            },
        }
    }

    /// `‖v^0‖_h²`, exact for the Legendre basis.
    pub fn interior_norm_sq(&self, v: &WeakFunction) -> f64 {
        (0..self.n_elements())
            .map(|e| {
                let h = self.mesh.element_size(e);
                v.interior(e)
                    .iter()
                    .enumerate()
                    .map(|(j, c)| 0.5 * h * legendre_norm_sq(j) * c * c)
                    .sum::<f64>()
            })
            .sum()
    }

    /// `‖d_{w,r} v‖_h²`.
    pub fn weak_derivative_norm_sq(&self, v: &WeakFunction) -> f64 {
        let mut local = vec![0.0; self.k + 3];
        let mut d = vec![0.0; self.k + 2];
        (0..self.n_elements())
            .map(|e| {
                v.local_data(e, &mut local);
                self.deriv_ops[e].apply(&local, &mut d);
                let h = self.mesh.element_size(e);
                d.iter()
                    .enumerate()
                    .map(|(m, c)| 0.5 * h * legendre_norm_sq(m) * c * c)
                    .sum::<f64>()
            })
            .sum()
    }

    /// `‖v^0‖_h² + Σ_i w_i (v^i)²` with `w_i` the mean length of the elements
    /// touching node `i`. Used to measure Picard increments.
    pub fn full_norm(&self, v: &WeakFunction) -> f64 {
        let sizes = self.mesh.element_sizes();
        let n_el = sizes.len();
        let nodes: f64 = v
            .node_values
            .iter()
            .enumerate()
            .map(|(i, &val)| {
                let left = if i > 0 { sizes[i - 1] } else { 0.0 };
                let right = if i < n_el { sizes[i] } else { 0.0 };
                0.5 * (left + right) * val * val
            })
            .sum();
        (self.interior_norm_sq(v) + nodes).sqrt()
    }
}

/// Where [`WgSpace::evaluate`] reads a weak function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Interior,
    Node,
    /// `Node` at mesh nodes, `Interior` elsewhere.
    Auto,
}

/// `G[j][m] = ∫_{-1}^{1} P_j P_m' dt` for `j ≤ k`, `m ≤ k + 1`, row-major.
fn reference_stiffness(k: usize, rule: &QuadratureRule) -> Vec<f64> {
    let r = k + 1;
    let mut g = vec![0.0; (k + 1) * (r + 1)];
    let mut vals = vec![0.0; r + 1];
    let mut ders = vec![0.0; r + 1];
    for (&t, &w) in rule.points.iter().zip(&rule.weights) {
        legendre_values_and_derivatives(t, &mut vals, &mut ders);
        for j in 0..=k {
            for m in 0..=r {
                g[j * (r + 1) + m] += w * vals[j] * ders[m];
            }
        }
    }
    g
}

/// Local `L²` projection of `f` onto `P_l(a, b)`, in Legendre coefficients.
pub fn l2_project(
    f: impl Fn(f64) -> f64,
    l: usize,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> RefPoly {
    let mut coeffs = vec![0.0; l + 1];
    let mut vals = vec![0.0; l + 1];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for (&t, &w) in rule.points.iter().zip(&rule.weights) {
        legendre_values(t, &mut vals);
        let fx = f(mid + half * t);
        for (c, p) in coeffs.iter_mut().zip(&vals) {
            *c += w * fx * p;
        }
    }
    for (j, c) in coeffs.iter_mut().enumerate() {
        *c /= legendre_norm_sq(j);
    }
    RefPoly::new(coeffs)
}
