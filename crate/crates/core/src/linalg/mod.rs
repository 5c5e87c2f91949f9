//! Dense linear algebra: a row-major matrix type, vector helpers, SVD,
//! symmetric eigendecomposition and the hard-thresholding selections the
//! projection catalog is built on.
//!
//! Everything here is a pure function of its inputs.

mod eig;
mod subspace;
mod svd;
mod threshold;

pub use eig::{sym_eig, EigFactors};
pub use subspace::{leading_singular_triplets, LeadingTriplets, SubspaceOptions};
pub use svd::{svd, SvdFactors};
pub use threshold::{
    hard_threshold_by_score, hard_threshold_magnitude, hard_threshold_value, top_k_indices,
};

use crate::error::{Error, Result};
use crate::par::{Execution, PAR_THRESHOLD};

/// Row-major dense matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Wraps row-major `data`; rejects a length mismatch or non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_raw(rows, cols, data)
    }

    /// Builds a matrix from row slices.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for (j, &v) in self.row(i).iter().enumerate() {
                out[j * self.rows + i] = v;
            }
        }
        Self::from_raw(self.cols, self.rows, out)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        self.matmul_with(other, Execution::default())
    }

    /// `self · other`, parallel over output rows for large products.
    pub fn matmul_with(&self, other: &Self, exec: Execution) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let (m, p) = (self.rows, other.cols);
        let mut out = vec![0.0; m * p];
        let exec = if m * self.cols * p < PAR_THRESHOLD {
            Execution::Sequential
        } else {
            exec
        };
        let rows_per_chunk = (m / 64).max(1);
        exec.for_each_chunk_mut(&mut out, rows_per_chunk * p, |chunk, block| {
            let first = chunk * rows_per_chunk;
            for (r, out_row) in block.chunks_mut(p).enumerate() {
                for (&a, b_row) in self.row(first + r).iter().zip(other.data.chunks(p)) {
                    if a != 0.0 {
                        axpy(a, b_row, out_row);
                    }
                }
            }
        });
        Self::from_raw(m, p, out)
    }

    pub fn t_matmul(&self, other: &Self) -> Self {
        self.t_matmul_with(other, Execution::default())
    }

    /// `selfᵀ · other` without forming the transpose.
    pub fn t_matmul_with(&self, other: &Self, exec: Execution) -> Self {
        assert_eq!(self.rows, other.rows, "t_matmul shape mismatch");
        let (n, p) = (self.cols, other.cols);
        let mut out = vec![0.0; n * p];
        let exec = if self.rows * n * p < PAR_THRESHOLD {
            Execution::Sequential
        } else {
            exec
        };
        let cols_per_chunk = (n / 64).max(1);
        exec.for_each_chunk_mut(&mut out, cols_per_chunk * p, |chunk, block| {
            let first = chunk * cols_per_chunk;
            let width = block.len() / p;
            for i in 0..self.rows {
                let a_row = &self.row(i)[first..first + width];
                let b_row = other.row(i);
                for (&a, out_row) in a_row.iter().zip(block.chunks_mut(p)) {
                    if a != 0.0 {
                        axpy(a, b_row, out_row);
                    }
                }
            }
        });
        Self::from_raw(n, p, out)
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        assert!(k <= self.cols);
        Self::from_fn(self.rows, k, |i, j| self.get(i, j))
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest entry of `|W − Wᵀ|`; square matrices only.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Self::from_raw(self.rows, self.cols, sub(&self.data, &other.data))
    }

    /// `U · Diag(d) · Vᵀ` using the first `d.len()` columns of `u` and `v`.
    pub fn from_factors(u: &Self, d: &[f64], v: &Self) -> Self {
        let (m, n) = (u.rows, v.rows);
        let mut out = vec![0.0; m * n];
        let r = d.len();
        for i in 0..m {
            let out_row = &mut out[i * n..(i + 1) * n];
            for (l, &dl) in d.iter().enumerate().take(r) {
                let coeff = u.get(i, l) * dl;
                if coeff == 0.0 {
                    continue;
                }
                for (j, o) in out_row.iter_mut().enumerate() {
                    *o += coeff * v.get(j, l);
                }
            }
        }
        Self::from_raw(m, n, out)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// `y ← y + alpha·x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn scale(alpha: f64, a: &[f64]) -> Vec<f64> {
    a.iter().map(|v| alpha * v).collect()
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(DenseMatrix::new(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(DenseMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn matmul_matches_naive_in_both_modes() {
        let a = DenseMatrix::from_fn(70, 90, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let b = DenseMatrix::from_fn(90, 60, |i, j| ((i * 5 + j) % 13) as f64 * 0.5);
        let naive = DenseMatrix::from_fn(70, 60, |i, j| (0..90).map(|l| a.get(i, l) * b.get(l, j)).sum());
        for exec in [Execution::Parallel, Execution::Sequential] {
            let c = a.matmul_with(&b, exec);
            assert!(c.sub(&naive).max_abs() < 1e-9);
        }
    }

    #[test]
    fn t_matmul_matches_explicit_transpose() {
        let a = DenseMatrix::from_fn(90, 130, |i, j| ((i * 3 + j * 7) % 17) as f64 - 8.0);
        let b = DenseMatrix::from_fn(90, 40, |i, j| ((i + 2 * j) % 5) as f64);
        let want = a.transpose().matmul(&b);
        for exec in [Execution::Parallel, Execution::Sequential] {
            assert!(a.t_matmul_with(&b, exec).sub(&want).max_abs() < 1e-9);
        }
    }

    #[test]
    fn transpose_roundtrip() {
        let a = DenseMatrix::from_fn(3, 5, |i, j| (i * 5 + j) as f64);
        assert_eq!(a.transpose().get(4, 2), a.get(2, 4));
        assert_eq!(a.transpose().transpose(), a);
    }
}
