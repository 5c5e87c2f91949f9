//! Proximal mappings and projections.
//!
//! Every penalty is a [`ProxFriendly`]: a nonnegative closed function with a
//! computable proximal point. Indicator functions of closed sets are built by
//! wrapping a [`ClosedSet`] in [`Indicator`]. Matrix-valued points are stored
//! flat in row-major order.

use crate::error::{Error, Result};
use crate::linalg::{
    self, hard_threshold_magnitude, leading_singular_triplets, svd, sym_eig, top_k_indices,
    DenseMatrix, SubspaceOptions,
};
use std::fmt::Debug;
use std::sync::Mutex;

/// Relative slack used by domain membership tests: a point is in the domain
/// when its distance to it is at most `DOMAIN_RTOL·max(1, ‖y‖)`.
pub const DOMAIN_RTOL: f64 = 1e-9;

pub fn domain_slack(y: &[f64]) -> f64 {
    DOMAIN_RTOL * linalg::norm(y).max(1.0)
}

pub trait ProxFriendly: Debug + Send + Sync {
    /// Required input length, if fixed.
    fn dim(&self) -> Option<usize>;

    /// Function value; `+∞` outside the domain.
    fn value(&self, y: &[f64]) -> f64;

    /// A minimiser of `u ↦ ‖y − u‖²/(2γ) + value(u)`.
    fn prox(&self, gamma: f64, y: &[f64]) -> Result<Vec<f64>>;

    /// Euclidean distance from `y` to the domain.
    fn dist_to_domain(&self, y: &[f64]) -> Result<f64>;

    fn in_domain(&self, y: &[f64]) -> bool {
        self.dist_to_domain(y)
            .map(|d| d <= domain_slack(y))
            .unwrap_or(false)
    }

    fn is_indicator(&self) -> bool {
        false
    }

    /// `value(u)` for a point `u` returned by [`ProxFriendly::prox`]; skips the
    /// domain test, which holds by construction.
    fn value_at_prox_point(&self, u: &[f64]) -> f64 {
        if self.is_indicator() {
            0.0
        } else {
            self.value(u)
        }
    }

    /// `value(u) − value(x)` for `x`, `u` in the domain. Separable functions
    /// sum entrywise differences so that a small change keeps its precision
    /// next to a large total.
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        self.value_at_prox_point(u) - self.value_at_prox_point(x)
    }

    fn name(&self) -> String;
}

/// `Σ (φ(u_i) − φ(x_i))` with each difference formed by `d`.
fn separable_diff(x: &[f64], u: &[f64], d: impl Fn(f64, f64) -> f64) -> f64 {
    debug_assert_eq!(x.len(), u.len());
    x.iter().zip(u).map(|(&a, &b)| if a == b { 0.0 } else { d(a, b) }).sum()
}

/// `|b| − |a|`.
fn abs_diff(a: f64, b: f64) -> f64 {
    b.abs() - a.abs()
}

/// `√|b| − √|a|` without cancellation.
fn sqrt_abs_diff(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    (b - a) / (b.sqrt() + a.sqrt())
}

/// A nonempty closed set with a computable Euclidean projection.
pub trait ClosedSet: Debug + Send + Sync {
    fn dim(&self) -> Option<usize>;
    fn project(&self, y: &[f64]) -> Result<Vec<f64>>;
    fn distance(&self, y: &[f64]) -> Result<f64> {
        Ok(linalg::dist(y, &self.project(y)?))
    }
    fn name(&self) -> String;
}

/// `δ_C` for a closed set `C`.
#[derive(Debug)]
pub struct Indicator<S>(pub S);

impl<S: ClosedSet> ProxFriendly for Indicator<S> {
    fn dim(&self) -> Option<usize> {
        self.0.dim()
    }

    fn value(&self, y: &[f64]) -> f64 {
        if self.in_domain(y) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, gamma: f64, y: &[f64]) -> Result<Vec<f64>> {
        check_gamma(gamma)?;
        check_input(y, self.dim())?;
        self.0.project(y)
    }

    fn dist_to_domain(&self, y: &[f64]) -> Result<f64> {
        check_input(y, self.dim())?;
        self.0.distance(y)
    }

    fn is_indicator(&self) -> bool {
        true
    }

    fn name(&self) -> String {
        format!("indicator({})", self.0.name())
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("prox parameter must be positive, got {gamma}")))
    }
}

fn check_input(y: &[f64], dim: Option<usize>) -> Result<()> {
    if let Some(d) = dim {
        if y.len() != d {
            return Err(Error::Dimension(format!("expected length {d}, got {}", y.len())));
        }
    }
    if !linalg::all_finite(y) {
        return Err(Error::NonFinite("prox input"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Scalar-separable proxes
// ---------------------------------------------------------------------------

#[inline]
fn soft(y: f64, t: f64) -> f64 {
    y.signum() * (y.abs() - t).max(0.0)
}

/// Soft thresholding: `sign(y_i)·max(|y_i| − γ, 0)`.
pub fn prox_l1(y: &[f64], gamma: f64) -> Vec<f64> {
    y.iter().map(|&v| soft(v, gamma)).collect()
}

/// Global minimiser of `u ↦ ½(u − y)² + γ|u|^{1/2}`; zero on ties.
pub fn prox_half_scalar(y: f64, gamma: f64) -> f64 {
    let a = y.abs();
    if a <= 1.5 * gamma.powf(2.0 / 3.0) {
        return 0.0;
    }
    let phi = ((gamma / 4.0) * (a / 3.0).powf(-1.5)).clamp(-1.0, 1.0).acos();
    let c = (2.0 * std::f64::consts::PI / 3.0 - 2.0 * phi / 3.0).cos();
    (2.0 / 3.0) * y * (1.0 + c)
}

pub fn prox_half(y: &[f64], gamma: f64) -> Vec<f64> {
    y.iter().map(|&v| prox_half_scalar(v, gamma)).collect()
}

/// `clamp(prox_l1(y, γ), −τ, τ)`.
pub fn prox_l1_box(y: &[f64], gamma: f64, tau: f64) -> Vec<f64> {
    y.iter().map(|&v| soft(v, gamma).clamp(-tau, tau)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroFn;

impl ProxFriendly for ZeroFn {
    fn dim(&self) -> Option<usize> {
        None
    }
    fn value(&self, _y: &[f64]) -> f64 {
        0.0
    }
    fn prox(&self, gamma: f64, y: &[f64]) -> Result<Vec<f64>> {
        check_gamma(gamma)?;
        check_input(y, None)?;
        Ok(y.to_vec())
    }
    fn dist_to_domain(&self, _y: &[f64]) -> Result<f64> {
        Ok(0.0)
    }
    fn name(&self) -> String {
        "zero".into()
    }
}

/// `weight·‖y‖₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L1Norm {
    pub weight: f64,
}

impl ProxFriendly for L1Norm {
    fn dim(&self) -> Option<usize> {
        None
    }
    fn value(&self, y: &[f64]) -> f64 {
        self.weight * y.iter().map(|v| v.abs()).sum::<f64>()
    }
    fn prox(&self, gamma: f64, y: &[f64]) -> Result<Vec<f64>> {
        check_gamma(gamma)?;
        check_input(y, None)?;
        Ok(prox_l1(y, gamma * self.weight))
    }
    fn dist_to_domain(&self, _y: &[f64]) -> Result<f64> {
        Ok(0.0)
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        self.weight * separable_diff(x, u, abs_diff)
    }
    fn name(&self) -> String {
        format!("{}*l1", self.weight)
    }
}

/// `weight·Σ|y_i|^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPower {
    pub weight: f64,
}

impl ProxFriendly for HalfPower {
    fn dim(&self) -> Option<usize> {
        None
    }
    fn value(&self, y: &[f64]) -> f64 {
        self.weight * y.iter().map(|v| v.abs().sqrt()).sum::<f64>()
    }
    fn prox(&self, gamma: f64, y: &[f64]) -> Result<Vec<f64>> {
        check_gamma(gamma)?;
        check_input(y, None)?;
        Ok(prox_half(y, gamma * self.weight))
    }
    fn dist_to_domain(&self, _y: &[f64]) -> Result<f64> {
        Ok(0.0)
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        self.weight * separable_diff(x, u, sqrt_abs_diff)
    }
    fn name(&self) -> String {
        format!("{}*l_half", self.weight)
    }
}

/// `weight·‖y‖₁ + δ_{‖y‖_∞ ≤ τ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L1Box {
    pub weight: f64,
    pub tau: f64,
}

impl ProxFriendly for L1Box {
    fn dim(&self) -> Option<usize> {
        None
    }
    fn value(&self, y: &[f64]) -> f64 {
        if self.in_domain(y) {
            self.weight * y.iter().map(|v| v.abs()).sum::<f64>()
        } else {
            f64::INFINITY
        }
    }
    fn prox(&self, gamma: f64, y: &[f64]) -> Result<Vec<f64>> {
        check_gamma(gamma)?;
        check_input(y, None)?;
        Ok(prox_l1_box(y, gamma * self.weight, self.tau))
    }
    fn dist_to_domain(&self, y: &[f64]) -> Result<f64> {
        Ok(y.iter()
            .map(|v| (v.abs() - self.tau).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt())
    }
    fn value_at_prox_point(&self, u: &[f64]) -> f64 {
        self.weight * u.iter().map(|v| v.abs()).sum::<f64>()
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        self.weight * separable_diff(x, u, abs_diff)
    }
    fn name(&self) -> String {
        format!("{}*l1+box({})", self.weight, self.tau)
    }
}

// ---------------------------------------------------------------------------
// Vector projections
// ---------------------------------------------------------------------------

/// Projection onto `{x : ‖x‖₀ ≤ k, 0 ≤ x ≤ τ}`.
pub fn proj_ksparse_box(y: &[f64], k: usize, tau: f64) -> Result<Vec<f64>> {
    let score: Vec<f64> = y
        .iter()
        .map(|&v| {
            let r = (v - tau).max(0.0).min(v);
            0.5 * v * v - 0.5 * r * r
        })
        .collect();
    let mut out = vec![0.0; y.len()];
    for i in top_k_indices(&score, k)? {
        out[i] = y[i].min(tau).max(0.0);
    }
    Ok(out)
}

/// `{x : ‖x‖₀ ≤ k, 0 ≤ x ≤ τ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KSparseBox {
    pub n: usize,
    pub k: usize,
    pub tau: f64,
}

impl KSparseBox {
    pub fn new(n: usize, k: usize, tau: f64) -> Result<Self> {
        if k == 0 || k > n || !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "k-sparse box needs 1 ≤ k ≤ n and τ > 0 (n={n}, k={k}, τ={tau})"
            )));
        }
        Ok(Self { n, k, tau })
    }
}

impl ClosedSet for KSparseBox {
    fn dim(&self) -> Option<usize> {
        Some(self.n)
    }
    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        proj_ksparse_box(y, self.k, self.tau)
    }
    fn name(&self) -> String {
        format!("ksparse_box(k={}, tau={})", self.k, self.tau)
    }
}

/// Projection onto `{x : eᵀx = 1, rᵀx = r0}`.
pub fn proj_affine2(y: &[f64], r: &[f64], r0: f64) -> Result<Vec<f64>> {
    AffinePair::new(r.to_vec(), r0)?.project(y)
}

/// `{x : eᵀx = 1, rᵀx = r0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePair {
    r: Vec<f64>,
    r0: f64,
    // Gram entries [[n, eᵀr], [eᵀr, rᵀr]] and determinant
    sum_r: f64,
    rr: f64,
    det: f64,
}

impl AffinePair {
    pub fn new(r: Vec<f64>, r0: f64) -> Result<Self> {
        if r.is_empty() || !linalg::all_finite(&r) || !r0.is_finite() {
            return Err(Error::InvalidArgument("affine pair needs finite, nonempty r".into()));
        }
        let n = r.len() as f64;
        let sum_r: f64 = r.iter().sum();
        let rr = linalg::norm_sq(&r);
        let det = n * rr - sum_r * sum_r;
        if det.abs() < 1e-14 * n * rr {
            return Err(Error::DegenerateConstraints);
        }
        Ok(Self { r, r0, sum_r, rr, det })
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }
}

impl ClosedSet for AffinePair {
    fn dim(&self) -> Option<usize> {
        Some(self.r.len())
    }
    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.r.len() {
            return Err(Error::Dimension(format!(
                "expected length {}, got {}",
                self.r.len(),
                y.len()
            )));
        }
        let n = self.r.len() as f64;
        let b1 = y.iter().sum::<f64>() - 1.0;
        let b2 = linalg::dot(&self.r, y) - self.r0;
        let alpha = (self.rr * b1 - self.sum_r * b2) / self.det;
        let beta = (n * b2 - self.sum_r * b1) / self.det;
        Ok(y.iter()
            .zip(&self.r)
            .map(|(yi, ri)| yi - alpha - beta * ri)
            .collect())
    }
    fn name(&self) -> String {
        format!("affine2(r0={})", self.r0)
    }
}

// ---------------------------------------------------------------------------
// Matrix projections
// ---------------------------------------------------------------------------

/// Projection onto rank-`k` matrices (`psd = false`, optional spectral-norm
/// cap `τ`) or rank-`k` positive semidefinite matrices (`psd = true`,
/// optional eigenvalue cap `τ`).
pub fn proj_spectral(
    w: &DenseMatrix,
    k: usize,
    tau: Option<f64>,
    psd: bool,
) -> Result<DenseMatrix> {
    check_rank(w.rows(), w.cols(), k)?;
    if psd {
        psd_projection(w, k, tau)
    } else {
        rank_projection(w, k, tau, None)
    }
}

fn check_rank(m: usize, n: usize, k: usize) -> Result<()> {
    if k == 0 || k > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "rank bound must satisfy 1 ≤ k ≤ {}, got {k}",
            m.min(n)
        )));
    }
    Ok(())
}

fn check_tau(tau: Option<f64>) -> Result<()> {
    match tau {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(Error::InvalidArgument(format!(
            "cap τ must be positive and finite, got {t}"
        ))),
        _ => Ok(()),
    }
}

fn rank_projection(
    w: &DenseMatrix,
    k: usize,
    tau: Option<f64>,
    warm: Option<&Mutex<Option<DenseMatrix>>>,
) -> Result<DenseMatrix> {
    let opts = SubspaceOptions::default();
    let (m, n) = w.shape();
    let factors = if k + opts.oversample < m.min(n) / 2 {
        let guard = warm.map(|c| c.lock().unwrap_or_else(|e| e.into_inner()));
        let start = guard.as_ref().and_then(|g| g.as_ref()).cloned();
        drop(guard);
        match leading_singular_triplets(w, k, &opts, start.as_ref())? {
            Some(t) => {
                if let Some(cache) = warm {
                    *cache.lock().unwrap_or_else(|e| e.into_inner()) = Some(t.basis);
                }
                t.factors
            }
            None => svd(w)?,
        }
    } else {
        svd(w)?
    };
    let d: Vec<f64> = factors.sigma[..k]
        .iter()
        .map(|&s| tau.map_or(s, |t| s.min(t)))
        .collect();
    Ok(DenseMatrix::from_factors(&factors.u, &d, &factors.v))
}

fn psd_projection(w: &DenseMatrix, k: usize, tau: Option<f64>) -> Result<DenseMatrix> {
    let eig = sym_eig(w)?;
    let d: Vec<f64> = eig.lambda[..k]
        .iter()
        .map(|&l| tau.map_or(l, |t| l.min(t)).max(0.0))
        .collect();
    Ok(DenseMatrix::from_factors(&eig.u, &d, &eig.u))
}

/// `{X ∈ ℝ^{m×n} : rank X ≤ k}`, optionally intersected with `‖X‖₂ ≤ τ`.
///
/// Keeps the Ritz basis of the last projection as a warm start for the next
/// one; the cache only affects speed, not the result beyond rounding.
#[derive(Debug)]
pub struct RankSet {
    pub rows: usize,
    pub cols: usize,
    pub k: usize,
    pub tau: Option<f64>,
    warm: Mutex<Option<DenseMatrix>>,
}

impl RankSet {
    pub fn new(rows: usize, cols: usize, k: usize, tau: Option<f64>) -> Result<Self> {
        check_rank(rows, cols, k)?;
        check_tau(tau)?;
        Ok(Self { rows, cols, k, tau, warm: Mutex::new(None) })
    }

    fn as_matrix(&self, y: &[f64]) -> Result<DenseMatrix> {
        DenseMatrix::new(self.rows, self.cols, y.to_vec())
    }
}

impl ClosedSet for RankSet {
    fn dim(&self) -> Option<usize> {
        Some(self.rows * self.cols)
    }
    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        let w = self.as_matrix(y)?;
        Ok(rank_projection(&w, self.k, self.tau, Some(&self.warm))?.into_vec())
    }
    fn name(&self) -> String {
        match self.tau {
            Some(t) => format!("rank<={} cap {t}", self.k),
            None => format!("rank<={}", self.k),
        }
    }
}

/// `{X ⪰ 0 : rank X ≤ k}`, optionally with eigenvalues capped at `τ`.
///
/// Non-symmetric inputs are symmetrised before projecting, which is exact:
/// the set lies in the symmetric subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdRankSet {
    pub n: usize,
    pub k: usize,
    pub tau: Option<f64>,
}

impl PsdRankSet {
    pub fn new(n: usize, k: usize, tau: Option<f64>) -> Result<Self> {
        check_rank(n, n, k)?;
        check_tau(tau)?;
        Ok(Self { n, k, tau })
    }
}

impl ClosedSet for PsdRankSet {
    fn dim(&self) -> Option<usize> {
        Some(self.n * self.n)
    }
    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let w = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (y[i * n + j] + y[j * n + i]));
        Ok(psd_projection(&w, self.k, self.tau)?.into_vec())
    }
    fn name(&self) -> String {
        format!("psd rank<={}", self.k)
    }
}

fn entry_sparse_flat(y: &[f64], s: usize, tau: Option<f64>) -> Result<Vec<f64>> {
    match tau {
        None => hard_threshold_magnitude(y, s),
        Some(t) => {
            let score: Vec<f64> = y
                .iter()
                .map(|&v| {
                    let r = (v.abs() - t).max(0.0);
                    0.5 * v * v - 0.5 * r * r
                })
                .collect();
            let mut out = vec![0.0; y.len()];
            for i in top_k_indices(&score, s)? {
                out[i] = y[i].clamp(-t, t);
            }
            Ok(out)
        }
    }
}

/// Projection onto `{X : ‖vec X‖₀ ≤ s}`, optionally with `max|X_ij| ≤ τ`.
pub fn proj_entry_sparse(y: &DenseMatrix, s: usize, tau: Option<f64>) -> Result<DenseMatrix> {
    if s == 0 {
        return Err(Error::InvalidArgument("sparsity level must be at least 1".into()));
    }
    check_tau(tau)?;
    let out = entry_sparse_flat(y.as_slice(), s, tau)?;
    Ok(DenseMatrix::from_raw(y.rows(), y.cols(), out))
}

/// `{X : ‖vec X‖₀ ≤ s}`, optionally with `max|X_ij| ≤ τ`. Also serves plain
/// vectors with `cols = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntrySparse {
    pub rows: usize,
    pub cols: usize,
    pub s: usize,
    pub tau: Option<f64>,
}

impl EntrySparse {
    pub fn new(rows: usize, cols: usize, s: usize, tau: Option<f64>) -> Result<Self> {
        if s == 0 || s > rows * cols {
            return Err(Error::InvalidArgument(format!(
                "sparsity level must satisfy 1 ≤ s ≤ {}, got {s}",
                rows * cols
            )));
        }
        check_tau(tau)?;
        Ok(Self { rows, cols, s, tau })
    }
}

impl ClosedSet for EntrySparse {
    fn dim(&self) -> Option<usize> {
        Some(self.rows * self.cols)
    }
    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        entry_sparse_flat(y, self.s, self.tau)
    }
    fn name(&self) -> String {
        format!("nnz<={}", self.s)
    }
}

/// Boolean matrix selecting entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        if rows * cols != bits.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} mask needs {} entries, got {}",
                rows * cols,
                bits.len()
            )));
        }
        Ok(Self { rows, cols, bits })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let bits = (0..rows * cols).map(|l| f(l / cols, l % cols)).collect();
        Self { rows, cols, bits }
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| false)
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }
}

/// Projection onto `{X : X_ij = M_ij on the mask}`, with unmasked entries
/// clamped to `[−τ, τ]` when a cap is given.
pub fn proj_fixed_entries(
    x: &DenseMatrix,
    mask: &Mask,
    m: &DenseMatrix,
    tau: Option<f64>,
) -> Result<DenseMatrix> {
    let set = FixedEntries::new(mask.clone(), m.clone(), tau)?;
    if x.shape() != m.shape() {
        return Err(Error::Dimension("X and M shapes differ".into()));
    }
    Ok(DenseMatrix::from_raw(x.rows(), x.cols(), set.project(x.as_slice())?))
}

/// `{X : P_Θ(X) = P_Θ(M)}`, optionally with `max|X_ij| ≤ τ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedEntries {
    mask: Mask,
    values: DenseMatrix,
    tau: Option<f64>,
}

impl FixedEntries {
    pub fn new(mask: Mask, values: DenseMatrix, tau: Option<f64>) -> Result<Self> {
        if mask.shape() != values.shape() {
            return Err(Error::Dimension("mask and M shapes differ".into()));
        }
        check_tau(tau)?;
        if let Some(t) = tau {
            let worst = mask
                .bits
                .iter()
                .zip(values.as_slice())
                .filter(|(b, _)| **b)
                .fold(0.0f64, |w, (_, v)| w.max(v.abs()));
            if worst > t {
                return Err(Error::InfeasibleSet(format!(
                    "fixed entry of magnitude {worst} exceeds the cap {t}"
                )));
            }
        }
        Ok(Self { mask, values, tau })
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn values(&self) -> &DenseMatrix {
        &self.values
    }
}

impl ClosedSet for FixedEntries {
    fn dim(&self) -> Option<usize> {
        Some(self.mask.bits.len())
    }
    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.mask.bits.len() {
            return Err(Error::Dimension("point and mask shapes differ".into()));
        }
        Ok(y.iter()
            .zip(&self.mask.bits)
            .zip(self.values.as_slice())
            .map(|((&v, &fixed), &m)| match (fixed, self.tau) {
                (true, _) => m,
                (false, Some(t)) => v.clamp(-t, t),
                (false, None) => v,
            })
            .collect())
    }
    fn name(&self) -> String {
        format!("fixed {} entries", self.mask.count())
    }
}
