//! Partitions of the unit interval.

use crate::error::{invalid, Result};

/// A partition `0 = x_1 < … < x_N = 1` of the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    sizes: Vec<f64>,
}

impl Mesh {
    /// Builds a mesh from explicit node coordinates.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(invalid("mesh needs at least two nodes"));
        }
        if nodes[0] != 0.0 || nodes[nodes.len() - 1] != 1.0 {
            return Err(invalid("mesh must start at 0 and end at 1"));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0] || !w[1].is_finite()) {
            return Err(invalid("mesh nodes must be strictly increasing"));
        }
        let sizes = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self { nodes, sizes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.sizes.len()
    }

    /// Length `h_i` of element `i`.
    pub fn element_size(&self, i: usize) -> f64 {
        self.sizes[i]
    }

    pub fn element_sizes(&self) -> &[f64] {
        &self.sizes
    }

    /// `h = max h_i`.
    pub fn h(&self) -> f64 {
        self.sizes.iter().copied().fold(0.0, f64::max)
    }

    /// Endpoints `(x_i, x_{i+1})` of element `i`.
    pub fn element(&self, i: usize) -> (f64, f64) {
        (self.nodes[i], self.nodes[i + 1])
    }

    /// Affine map from `[-1, 1]` onto element `i`, with its Jacobian `h_i / 2`.
    pub fn map_to_element(&self, element: usize, ref_point: f64) -> Result<(f64, f64)> {
        if element >= self.n_elements() {
            return Err(invalid(format!(
                "element index {element} out of range (mesh has {})",
                self.n_elements()
            )));
        }
        let (a, b) = self.element(element);
        if ref_point == 1.0 {
            return Ok((b, 0.5 * (b - a)));
        }
        Ok((a + (ref_point + 1.0) * 0.5 * (b - a), 0.5 * (b - a)))
    }

    /// Reference coordinate of physical `x` in element `i` (no range check).
    pub fn to_reference(&self, element: usize, x: f64) -> f64 {
        let (a, b) = self.element(element);
        2.0 * (x - a) / (b - a) - 1.0
    }

    /// Element containing `x`; points on shared nodes go to the left element.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(0.0..=1.0).contains(&x) {
            return None;
        }
        // first node index with nodes[j] >= x
        let j = self.nodes.partition_point(|&n| n < x);
        Some(j.saturating_sub(1).min(self.n_elements() - 1))
    }

    /// Index of the node within `tol` of `x`, if any.
    pub fn node_index(&self, x: f64, tol: f64) -> Option<usize> {
        let j = self.nodes.partition_point(|&n| n < x);
        [j.saturating_sub(1), j.min(self.n_nodes() - 1)]
            .into_iter()
            .find(|&i| (self.nodes[i] - x).abs() <= tol)
    }
}

/// Uniform mesh with `n_elements` intervals of length `1 / n_elements`.
pub fn build_uniform_mesh(n_elements: usize) -> Result<Mesh> {
    if n_elements == 0 {
        return Err(invalid("build_uniform_mesh: need at least one element"));
    }
    let n = n_elements as f64;
    let nodes: Vec<f64> = (0..=n_elements).map(|i| i as f64 / n).collect();
    let sizes = vec![1.0 / n; n_elements];
    Ok(Mesh { nodes, sizes })
}
