//! Banded matrices and LU factorization with partial pivoting.

use crate::error::{invalid, Error, Result};

/// Relative pivot threshold below which a system is reported singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i − kl ..= i + ku` contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        m.data.iter_mut().for_each(|x| *x = 1.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.offset(i, j)]
        } else {
            0.0
        }
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let o = self.offset(i, j);
        self.data[o] = value;
    }

    /// Panics if `(i, j)` lies outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let o = self.offset(i, j);
        self.data[o] += value;
    }

    /// `self ← alpha · self + beta · other` for matrices of identical shape.
    pub fn combine(&mut self, alpha: f64, beta: f64, other: &BandMatrix) {
        assert_eq!((self.n, self.kl, self.ku), (other.n, other.kl, other.ku));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = alpha * *a + beta * b;
        }
    }

    pub fn fill_zero(&mut self) {
        self.data.iter_mut().for_each(|x| *x = 0.0);
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.data[self.offset(i, j)] * x[j]).sum()
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// LU factorization with partial pivoting restricted to the band.
    pub fn lu(&self) -> Result<BandLu> {
        BandLu::factor(self)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(invalid(format!(
                "rhs length {} does not match matrix dimension {}",
                rhs.len(),
                self.n
            )));
        }
        let lu = self.lu()?;
        let mut x = rhs.to_vec();
        lu.solve_in_place(&mut x);
        Ok(x)
    }
}

/// Banded LU factors; the upper factor has bandwidth `kl + ku` from pivoting fill.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    #[inline]
    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width() + (j + self.kl - i)
    }

    fn factor(a: &BandMatrix) -> Result<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let upper = kl + ku;
        let w = 2 * kl + ku + 1;
        let wa = kl + ku + 1;
        let mut data = vec![0.0; n * w];
        // same column offset convention, so each stored row copies verbatim
        for (dst, src) in data.chunks_exact_mut(w).zip(a.data.chunks_exact(wa)) {
            dst[..wa].copy_from_slice(src);
        }
        let mut pivots = vec![0; n];
        let scale = a.max_abs();
        for j in 0..n {
            let last = (j + kl).min(n - 1);
            let mut p = j;
            let mut best = data[j * w + kl].abs();
            for i in j + 1..=last {
                let v = data[i * w + j + kl - i].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > PIVOT_TOL * scale) {
                return Err(Error::SingularSystem {
                    row: j,
                    pivot: best,
                    scale,
                });
            }
            pivots[j] = p;
            let len = (j + upper).min(n - 1) - j + 1;
            let row_j = j * w + kl;
            if p != j {
                let row_p = p * w + j + kl - p;
                let (head, tail) = data.split_at_mut(row_p);
                head[row_j..row_j + len].swap_with_slice(&mut tail[..len]);
            }
            let pivot = data[row_j];
            for i in j + 1..=last {
                let row_i = i * w + j + kl - i;
                let (head, tail) = data.split_at_mut(row_i);
                let l = tail[0] / pivot;
                tail[0] = l;
                if l != 0.0 {
                    let src = &head[row_j + 1..row_j + len];
                    for (t, s) in tail[1..len].iter_mut().zip(src) {
                        *t -= l * s;
                    }
                }
            }
        }
        Ok(Self {
            n,
            kl,
            ku: upper,
            data,
            pivots,
        })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                b.swap(j, p);
            }
            let bj = b[j];
            if bj != 0.0 {
                for i in j + 1..=(j + self.kl).min(n - 1) {
                    b[i] -= self.data[self.idx(i, j)] * bj;
                }
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for c in i + 1..=(i + self.ku).min(n - 1) {
                s -= self.data[self.idx(i, c)] * b[c];
            }
            b[i] = s / self.data[self.idx(i, i)];
        }
    }
}
