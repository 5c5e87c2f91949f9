//! Builders for the shipped applications: fused sparse signal recovery,
//! simultaneously sparse and low-rank matrices, sparse portfolio selection,
//! matrix completion with fixed entries and low-rank correlation matrices.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::model::{
    CompositeProblem, FirstDifference, Identity, LeastSquaresIdentity, MaskedLeastSquares,
    QuadForm, Term, WeightedLeastSquares,
};
use crate::prox::{
    AffinePair, EntrySparse, FixedEntries, HalfPower, Indicator, KSparseBox, L1Box, L1Norm, Mask,
    ProxFriendly, PsdRankSet, RankSet,
};
use std::sync::Arc;

/// Cap used where the level-boundedness argument needs a bounded `P₀`.
pub const DEFAULT_CAP: f64 = 1e4;

/// Which constraint goes into `P₀` (handled exactly by the prox step) and
/// which one is smoothed by its Moreau envelope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    /// Rank constraint in `P₀`, the other constraint smoothed.
    R,
    /// The other constraint in `P₀`, rank constraint smoothed.
    S,
}

/// `½‖x − b‖² + c₁‖x‖₁ + c₂ Σ |(Dx)_i|^p`.
#[derive(Clone, Debug)]
pub struct FusedConfig {
    pub b: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    /// Exponent of the difference penalty; the prox catalog covers `1/2`.
    pub p: f64,
    /// Optional box `|x_i| ≤ τ` folded into the ℓ1 part.
    pub tau: Option<f64>,
}

impl FusedConfig {
    pub fn new(b: Vec<f64>, c1: f64, c2: f64) -> Self {
        Self { b, c1, c2, p: 0.5, tau: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.len() < 2 {
            return Err(Error::Dimension("fused problems need at least two samples".into()));
        }
        if !crate::linalg::all_finite(&self.b) {
            return Err(Error::NonFinite("b"));
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0 && self.c1.is_finite() && self.c2.is_finite()) {
            return Err(Error::InvalidArgument("c1 and c2 must be nonnegative".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidArgument(format!("exponent must lie in (0,1), got {}", self.p)));
        }
        Ok(())
    }
}

pub fn build_fused(cfg: &FusedConfig) -> Result<CompositeProblem> {
    cfg.validate()?;
    if cfg.p != 0.5 {
        return Err(Error::InvalidArgument(format!(
            "no closed-form prox for exponent {}; only 1/2 is supported",
            cfg.p
        )));
    }
    let n = cfg.b.len();
    let p0: Arc<dyn ProxFriendly> = match cfg.tau {
        Some(tau) => Arc::new(L1Box { weight: cfg.c1, tau }),
        None => Arc::new(L1Norm { weight: cfg.c1 }),
    };
    let tv = Term::new(
        Arc::new(FirstDifference::new(n)?),
        Arc::new(HalfPower { weight: cfg.c2 }),
    )?;
    let x_feas = match cfg.tau {
        Some(tau) => vec![tau.min(1.0); n],
        None => vec![1.0; n],
    };
    CompositeProblem::new(Arc::new(LeastSquaresIdentity { b: cfg.b.clone() }), p0, vec![tv], x_feas)
}

/// `½‖X − M‖_F²` over matrices with at most `s` nonzeros and rank at most `k`.
#[derive(Clone, Debug)]
pub struct SlrConfig {
    pub m: DenseMatrix,
    pub s: usize,
    pub k: usize,
    pub split: Split,
}

/// Matrices are stored row-major; no caps, since `f` is level-bounded.
pub fn build_slr(cfg: &SlrConfig) -> Result<CompositeProblem> {
    let (rows, cols) = cfg.m.shape();
    let rank: Arc<dyn ProxFriendly> = Arc::new(Indicator(RankSet::new(rows, cols, cfg.k, None)?));
    let sparse: Arc<dyn ProxFriendly> =
        Arc::new(Indicator(EntrySparse::new(rows, cols, cfg.s, None)?));
    let (p0, smoothed) = match cfg.split {
        Split::R => (rank, sparse),
        Split::S => (sparse, rank),
    };
    let n = rows * cols;
    CompositeProblem::new(
        Arc::new(LeastSquaresIdentity { b: cfg.m.as_slice().to_vec() }),
        p0,
        vec![Term::new(Arc::new(Identity { n }), smoothed)?],
        vec![0.0; n],
    )
}

/// Alternates exact projections onto `dom a` and `dom b` from `start` until
/// the `dom a` iterate also lies in `dom b`.
fn alternating_projections(
    a: &dyn ProxFriendly,
    b: &dyn ProxFriendly,
    start: Vec<f64>,
    rounds: usize,
) -> Result<Vec<f64>> {
    let mut y = start;
    for _ in 0..rounds {
        let x = a.prox(1.0, &y)?;
        if b.in_domain(&x) {
            return Ok(x);
        }
        y = b.prox(1.0, &x)?;
    }
    Err(Error::NoFeasiblePoint { rounds })
}

pub const FEASIBILITY_ROUNDS: usize = 1000;

/// `½xᵀQx` over `{x: ‖x‖₀ ≤ k, 0 ≤ x ≤ τ}` with `eᵀx = 1`, `rᵀx = r₀`
/// smoothed.
pub fn build_portfolio(
    q: DenseMatrix,
    r: Vec<f64>,
    r0: f64,
    k: usize,
    tau: f64,
) -> Result<CompositeProblem> {
    let n = q.rows();
    if r.len() != n {
        return Err(Error::Dimension(format!("r has length {}, Q is {n}x{n}", r.len())));
    }
    let omega = Indicator(KSparseBox::new(n, k, tau)?);
    let affine = Indicator(AffinePair::new(r, r0)?);
    let start = affine.prox(1.0, &vec![1.0 / n as f64; n])?;
    let x_feas = alternating_projections(&omega, &affine, start, FEASIBILITY_ROUNDS)?;
    CompositeProblem::new(
        Arc::new(QuadForm::new(q)?),
        Arc::new(omega),
        vec![Term::new(Arc::new(Identity { n }), Arc::new(affine))?],
        x_feas,
    )
}

/// `½‖P_Ω(X − M)‖_F²` with `X_ij = M_ij` on `Θ` and rank at most `k`, both
/// sets capped at `τ` in max-entry and spectral norm respectively.
pub fn build_matrix_completion(
    m: DenseMatrix,
    omega: Mask,
    theta: Mask,
    k: usize,
    tau: Option<f64>,
    split: Split,
) -> Result<CompositeProblem> {
    let (rows, cols) = m.shape();
    if omega.shape() != (rows, cols) || theta.shape() != (rows, cols) {
        return Err(Error::Dimension("masks must match the data shape".into()));
    }
    let fixed: Arc<dyn ProxFriendly> = Arc::new(Indicator(FixedEntries::new(theta, m.clone(), tau)?));
    let rank: Arc<dyn ProxFriendly> = Arc::new(Indicator(RankSet::new(rows, cols, k, tau)?));
    let (p0, smoothed) = match split {
        Split::R => (rank, fixed),
        Split::S => (fixed, rank),
    };
    let x_feas = alternating_projections(
        p0.as_ref(),
        smoothed.as_ref(),
        vec![0.0; rows * cols],
        FEASIBILITY_ROUNDS,
    )?;
    CompositeProblem::new(
        Arc::new(MaskedLeastSquares { mask: omega, m }),
        p0,
        vec![Term::new(Arc::new(Identity { n: rows * cols }), smoothed)?],
        x_feas,
    )
}

/// `½‖H∘(X − M)‖_F²` over PSD matrices of rank at most `k` with unit
/// diagonal. The all-ones matrix is the starting point.
pub fn build_correlation(
    m: DenseMatrix,
    h: DenseMatrix,
    k: usize,
    tau: Option<f64>,
    split: Split,
) -> Result<CompositeProblem> {
    if !m.is_square() || h.shape() != m.shape() {
        return Err(Error::Dimension("M must be square and H must match it".into()));
    }
    let asymmetry = m.asymmetry();
    if asymmetry > 1e-12 * m.max_abs().max(1.0) {
        return Err(Error::Asymmetric { asymmetry });
    }
    if h.as_slice().iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidArgument("weights must be nonnegative".into()));
    }
    let n = m.rows();
    let unit_diag: Arc<dyn ProxFriendly> = Arc::new(Indicator(FixedEntries::new(
        Mask::diagonal(n),
        DenseMatrix::identity(n),
        tau,
    )?));
    let psd: Arc<dyn ProxFriendly> = Arc::new(Indicator(PsdRankSet::new(n, k, tau)?));
    let (p0, smoothed) = match split {
        Split::R => (psd, unit_diag),
        Split::S => (unit_diag, psd),
    };
    CompositeProblem::new(
        Arc::new(WeightedLeastSquares { h, m }),
        p0,
        vec![Term::new(Arc::new(Identity { n: n * n }), smoothed)?],
        vec![1.0; n * n],
    )
}
