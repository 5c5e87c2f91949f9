//! Linear maps, smooth losses, the composite problem
//! `F(x) = f(x) + P₀(x) + Σ P_i(A_i x)` and its smoothed surrogate
//! `F_λ(x) = f(x) + P₀(x) + Σ e_{λ_i}P_i(A_i x)` in the `h + P − g` form.

use crate::error::{Error, Result};
use crate::linalg::{self, axpy, dot, norm, norm_sq, sym_eig, svd, DenseMatrix};
use crate::moreau::MoreauTerm;
use crate::prox::{Mask, ProxFriendly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt::Debug;
use std::sync::Arc;

/// Default bound on `‖x‖` beyond which solvers abort.
pub const DEFAULT_NORM_CEILING: f64 = 1e8;

pub trait LinearOp: Debug + Send + Sync {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    fn adjoint(&self, y: &[f64]) -> Vec<f64>;
    /// Upper bound on `‖A‖²`.
    fn norm_sq_bound(&self) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Identity {
    pub n: usize,
}

impl LinearOp for Identity {
    fn in_dim(&self) -> usize {
        self.n
    }
    fn out_dim(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        y.to_vec()
    }
    fn norm_sq_bound(&self) -> f64 {
        1.0
    }
}

/// `(Dx)_i = x_{i+1} − x_i`, mapping `ℝⁿ → ℝⁿ⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FirstDifference {
    pub n: usize,
}

impl FirstDifference {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("difference operator needs n ≥ 2, got {n}")));
        }
        Ok(Self { n })
    }
}

impl LinearOp for FirstDifference {
    fn in_dim(&self) -> usize {
        self.n
    }
    fn out_dim(&self) -> usize {
        self.n - 1
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.windows(2).map(|w| w[1] - w[0]).collect()
    }
    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (i, &v) in y.iter().enumerate() {
            out[i] -= v;
            out[i + 1] += v;
        }
        out
    }
    fn norm_sq_bound(&self) -> f64 {
        4.0
    }
}

/// Coordinate projection `P_Ω`: keeps the masked entries, zeroes the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryMask {
    pub mask: Mask,
}

impl LinearOp for EntryMask {
    fn in_dim(&self) -> usize {
        self.mask.bits().len()
    }
    fn out_dim(&self) -> usize {
        self.mask.bits().len()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mask.bits())
            .map(|(&v, &b)| if b { v } else { 0.0 })
            .collect()
    }
    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        self.apply(y)
    }
    fn norm_sq_bound(&self) -> f64 {
        if self.mask.is_empty() {
            0.0
        } else {
            1.0
        }
    }
}

/// `vec(X)`: stacks the columns of a row-major `rows × cols` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vectorize {
    pub rows: usize,
    pub cols: usize,
}

impl LinearOp for Vectorize {
    fn in_dim(&self) -> usize {
        self.rows * self.cols
    }
    fn out_dim(&self) -> usize {
        self.rows * self.cols
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(x[i * self.cols + j]);
            }
        }
        out
    }
    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; y.len()];
        for j in 0..self.cols {
            for i in 0..self.rows {
                out[i * self.cols + j] = y[j * self.rows + i];
            }
        }
        out
    }
    fn norm_sq_bound(&self) -> f64 {
        1.0
    }
}

/// Explicit matrix `x ↦ Ax`.
#[derive(Clone, Debug)]
pub struct DenseOp {
    a: DenseMatrix,
    norm_sq: f64,
}

impl DenseOp {
    /// Uses the exact `σ_max(A)²` as the bound.
    pub fn new(a: DenseMatrix) -> Result<Self> {
        let norm_sq = svd(&a)?.sigma[0].powi(2);
        Ok(Self { a, norm_sq })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }
}

impl LinearOp for DenseOp {
    fn in_dim(&self) -> usize {
        self.a.cols()
    }
    fn out_dim(&self) -> usize {
        self.a.rows()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.a.rows()).map(|i| dot(self.a.row(i), x)).collect()
    }
    fn adjoint(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.a.cols()];
        for (i, &v) in y.iter().enumerate() {
            axpy(v, self.a.row(i), &mut out);
        }
        out
    }
    fn norm_sq_bound(&self) -> f64 {
        self.norm_sq
    }
}

/// Power-iteration estimate of `‖A‖²` inflated by 1%.
///
/// Runs on `A*A` from a seeded Gaussian start for at most 200 rounds, stopping
/// once the Rayleigh quotient changes by less than `1e-8` relatively.
pub fn estimate_norm_sq(op: &dyn LinearOp) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e_55ed);
    let mut x: Vec<f64> = (0..op.in_dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut est = 0.0;
    for _ in 0..200 {
        let nx = norm(&x);
        if nx == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let ax = op.apply(&x);
        let next = norm_sq(&ax);
        let done = (next - est).abs() <= 1e-8 * next.max(f64::MIN_POSITIVE);
        est = next;
        if done {
            break;
        }
        x = op.adjoint(&ax);
    }
    1.01 * est
}

pub trait SmoothFn: Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn grad(&self, x: &[f64]) -> Vec<f64>;
    /// Lipschitz constant of the gradient.
    fn lipschitz(&self) -> f64;
    /// `value(u) − value(x)`, formed without subtracting two large totals
    /// where the structure allows.
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        self.value(u) - self.value(x)
    }
}

/// `‖b‖² − ‖a‖²` summed as `Σ (b_i − a_i)(b_i + a_i)`.
pub fn sq_norm_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (y - x) * (y + x)).sum()
}

/// `Σ w_i²((u_i − m_i)² − (x_i − m_i)²)/2` with unit weights when `w` is absent.
fn weighted_sq_diff(x: &[f64], u: &[f64], m: &[f64], w: impl Fn(usize) -> f64) -> f64 {
    0.5 * x
        .iter()
        .zip(u)
        .zip(m)
        .enumerate()
        .map(|(i, ((a, b), c))| w(i) * (b - a) * ((b - c) + (a - c)))
        .sum::<f64>()
}

/// `½‖x − b‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeastSquaresIdentity {
    pub b: Vec<f64>,
}

impl SmoothFn for LeastSquaresIdentity {
    fn dim(&self) -> usize {
        self.b.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * linalg::dist(x, &self.b).powi(2)
    }
    fn grad(&self, x: &[f64]) -> Vec<f64> {
        linalg::sub(x, &self.b)
    }
    fn lipschitz(&self) -> f64 {
        1.0
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        weighted_sq_diff(x, u, &self.b, |_| 1.0)
    }
}

/// `½‖Ax − b‖²` with `L = σ_max(A)²`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    op: DenseOp,
    b: Vec<f64>,
}

impl LeastSquares {
    pub fn new(a: DenseMatrix, b: Vec<f64>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::Dimension("A and b disagree".into()));
        }
        Ok(Self { op: DenseOp::new(a)?, b })
    }
}

impl SmoothFn for LeastSquares {
    fn dim(&self) -> usize {
        self.op.in_dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * linalg::dist(&self.op.apply(x), &self.b).powi(2)
    }
    fn grad(&self, x: &[f64]) -> Vec<f64> {
        self.op.adjoint(&linalg::sub(&self.op.apply(x), &self.b))
    }
    fn lipschitz(&self) -> f64 {
        self.op.norm_sq_bound()
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        let rx = linalg::sub(&self.op.apply(x), &self.b);
        let ru = linalg::sub(&self.op.apply(u), &self.b);
        0.5 * sq_norm_diff(&rx, &ru)
    }
}

/// `½xᵀQx` for symmetric positive semidefinite `Q`, with `L = λ_max(Q)`.
#[derive(Clone, Debug)]
pub struct QuadForm {
    q: DenseMatrix,
    lmax: f64,
}

impl QuadForm {
    pub fn new(q: DenseMatrix) -> Result<Self> {
        let eig = sym_eig(&q)?;
        let lmin = *eig.lambda.last().unwrap_or(&0.0);
        if lmin < -1e-10 * eig.lambda[0].abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "quadratic form is not positive semidefinite (λ_min = {lmin})"
            )));
        }
        Ok(Self { q, lmax: eig.lambda[0].max(f64::MIN_POSITIVE) })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.q
    }
}

impl SmoothFn for QuadForm {
    fn dim(&self) -> usize {
        self.q.rows()
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * dot(x, &self.grad(x))
    }
    fn grad(&self, x: &[f64]) -> Vec<f64> {
        (0..self.q.rows()).map(|i| dot(self.q.row(i), x)).collect()
    }
    fn lipschitz(&self) -> f64 {
        self.lmax
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        let sum: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + b).collect();
        0.5 * dot(&linalg::sub(u, x), &self.grad(&sum))
    }
}

/// `½‖P_Ω(X − M)‖_F²`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskedLeastSquares {
    pub mask: Mask,
    pub m: DenseMatrix,
}

impl SmoothFn for MaskedLeastSquares {
    fn dim(&self) -> usize {
        self.m.as_slice().len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * norm_sq(&self.grad(x))
    }
    fn grad(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.m.as_slice())
            .zip(self.mask.bits())
            .map(|((xi, mi), &b)| if b { xi - mi } else { 0.0 })
            .collect()
    }
    fn lipschitz(&self) -> f64 {
        1.0
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        let bits = self.mask.bits();
        weighted_sq_diff(x, u, self.m.as_slice(), |i| if bits[i] { 1.0 } else { 0.0 })
    }
}

/// `½‖H ∘ (X − M)‖_F²` with `L = max H_ij²`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedLeastSquares {
    pub h: DenseMatrix,
    pub m: DenseMatrix,
}

impl SmoothFn for WeightedLeastSquares {
    fn dim(&self) -> usize {
        self.m.as_slice().len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * x
            .iter()
            .zip(self.m.as_slice())
            .zip(self.h.as_slice())
            .map(|((xi, mi), hi)| (hi * (xi - mi)).powi(2))
            .sum::<f64>()
    }
    fn grad(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.m.as_slice())
            .zip(self.h.as_slice())
            .map(|((xi, mi), hi)| hi * hi * (xi - mi))
            .collect()
    }
    fn lipschitz(&self) -> f64 {
        self.h.max_abs().powi(2).max(f64::MIN_POSITIVE)
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        let h = self.h.as_slice();
        weighted_sq_diff(x, u, self.m.as_slice(), |i| h[i] * h[i])
    }
}

/// One `(A_i, P_i)` pair.
#[derive(Clone, Debug)]
pub struct Term {
    pub op: Arc<dyn LinearOp>,
    pub penalty: Arc<dyn ProxFriendly>,
}

impl Term {
    pub fn new(op: Arc<dyn LinearOp>, penalty: Arc<dyn ProxFriendly>) -> Result<Self> {
        if let Some(d) = penalty.dim() {
            if d != op.out_dim() {
                return Err(Error::Dimension(format!(
                    "operator maps into ℝ^{} but the penalty lives on ℝ^{d}",
                    op.out_dim()
                )));
            }
        }
        Ok(Self { op, penalty })
    }
}

/// `F(x) = f(x) + P₀(x) + Σ P_i(A_i x)` together with a point in its domain.
///
/// Level-boundedness of `f + P₀` is the caller's responsibility; solvers guard
/// against runaway iterates with [`CompositeProblem::norm_ceiling`].
#[derive(Clone, Debug)]
pub struct CompositeProblem {
    f: Arc<dyn SmoothFn>,
    p0: Arc<dyn ProxFriendly>,
    terms: Vec<Term>,
    x_feas: Vec<f64>,
    norm_ceiling: f64,
}

impl CompositeProblem {
    pub fn new(
        f: Arc<dyn SmoothFn>,
        p0: Arc<dyn ProxFriendly>,
        terms: Vec<Term>,
        x_feas: Vec<f64>,
    ) -> Result<Self> {
        let n = f.dim();
        if x_feas.len() != n {
            return Err(Error::Dimension(format!(
                "x_feas has length {}, f expects {n}",
                x_feas.len()
            )));
        }
        if let Some(d) = p0.dim() {
            if d != n {
                return Err(Error::Dimension(format!("P0 lives on ℝ^{d}, f on ℝ^{n}")));
            }
        }
        for t in &terms {
            if t.op.in_dim() != n {
                return Err(Error::Dimension(format!(
                    "operator expects ℝ^{}, f lives on ℝ^{n}",
                    t.op.in_dim()
                )));
            }
        }
        if !linalg::all_finite(&x_feas) {
            return Err(Error::NonFinite("x_feas"));
        }
        if !p0.in_domain(&x_feas) {
            return Err(Error::OutsideDomain);
        }
        for t in &terms {
            if !t.penalty.in_domain(&t.op.apply(&x_feas)) {
                return Err(Error::OutsideDomain);
            }
        }
        Ok(Self { f, p0, terms, x_feas, norm_ceiling: DEFAULT_NORM_CEILING })
    }

    pub fn with_norm_ceiling(mut self, ceiling: f64) -> Self {
        self.norm_ceiling = ceiling;
        self
    }

    pub fn dim(&self) -> usize {
        self.x_feas.len()
    }

    pub fn f(&self) -> &Arc<dyn SmoothFn> {
        &self.f
    }

    pub fn p0(&self) -> &Arc<dyn ProxFriendly> {
        &self.p0
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn x_feas(&self) -> &[f64] {
        &self.x_feas
    }

    pub fn norm_ceiling(&self) -> f64 {
        self.norm_ceiling
    }

    /// `F(x)`; `+∞` when an indicator is violated.
    pub fn eval_objective(&self, x: &[f64]) -> f64 {
        let mut total = self.f.value(x) + self.p0.value(x);
        for t in &self.terms {
            total += t.penalty.value(&t.op.apply(x));
        }
        total
    }

    /// `F_λ(x)` with one smoothing parameter per term.
    pub fn eval_objective_lambda(&self, lambdas: &[f64], x: &[f64]) -> Result<f64> {
        self.surrogate(lambdas)?.eval(x).map(|e| e.value)
    }

    /// `dist(A_i x, dom P_i)` for every term.
    pub fn feasibility(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.terms
            .iter()
            .map(|t| t.penalty.dist_to_domain(&t.op.apply(x)))
            .collect()
    }

    pub fn surrogate(&self, lambdas: &[f64]) -> Result<SurrogateProblem> {
        if lambdas.len() != self.terms.len() {
            return Err(Error::Dimension(format!(
                "{} smoothing parameters for {} terms",
                lambdas.len(),
                self.terms.len()
            )));
        }
        let terms = self
            .terms
            .iter()
            .zip(lambdas)
            .map(|(t, &l)| MoreauTerm::new(t.penalty.clone(), t.op.clone(), l))
            .collect::<Result<Vec<_>>>()?;
        let lipschitz = self.f.lipschitz()
            + terms
                .iter()
                .map(|t| t.op().norm_sq_bound() / t.lambda())
                .sum::<f64>();
        Ok(SurrogateProblem {
            f: self.f.clone(),
            p0: self.p0.clone(),
            terms,
            lipschitz,
        })
    }
}

/// `F_λ` split as `h + P − g` with `h = f + Σ‖A_i x‖²/(2λ_i)`, `P = P₀` and
/// `g = Σ D_{λ_i,P_i}(A_i x)`.
#[derive(Clone, Debug)]
pub struct SurrogateProblem {
    f: Arc<dyn SmoothFn>,
    p0: Arc<dyn ProxFriendly>,
    terms: Vec<MoreauTerm>,
    lipschitz: f64,
}

/// Everything computed while evaluating `F_λ` at a point.
#[derive(Clone, Debug)]
pub struct SurrogateEval {
    pub value: f64,
    /// `A_i x`.
    pub images: Vec<Vec<f64>>,
    /// `ζ_i = prox_{λ_i P_i}(A_i x)`.
    pub prox_points: Vec<Vec<f64>>,
}

impl SurrogateProblem {
    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn p0(&self) -> &Arc<dyn ProxFriendly> {
        &self.p0
    }

    pub fn terms(&self) -> &[MoreauTerm] {
        &self.terms
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.lambda()).collect()
    }

    /// `L_h = L_f + Σ ‖A_i‖²/λ_i` with the operators' declared bounds.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn h_value(&self, x: &[f64]) -> f64 {
        self.f.value(x)
            + self
                .terms
                .iter()
                .map(|t| norm_sq(&t.op().apply(x)) / (2.0 * t.lambda()))
                .sum::<f64>()
    }

    pub fn h_grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.f.grad(x);
        for t in &self.terms {
            axpy(1.0 / t.lambda(), &t.op().adjoint(&t.op().apply(x)), &mut g);
        }
        g
    }

    /// `g(x) = Σ D_{λ_i,P_i}(A_i x)`.
    pub fn g_value(&self, x: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for t in &self.terms {
            total += t.dc_split(x)?.1;
        }
        Ok(total)
    }

    /// Aggregated concave-part subgradient `Σ (1/λ_i) A_i* ζ_i` with the
    /// individual prox points.
    pub fn g_subgrad(&self, x: &[f64]) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        let mut agg = vec![0.0; self.dim()];
        let mut zetas = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let (zeta, g) = t.concave_subgrad(x)?;
            axpy(1.0, &g, &mut agg);
            zetas.push(zeta);
        }
        Ok((zetas, agg))
    }

    /// `F_λ(x)` with `P₀(x)` evaluated in full.
    pub fn eval(&self, x: &[f64]) -> Result<SurrogateEval> {
        let p0 = self.p0.value(x);
        self.eval_with_p0(x, p0)
    }

    /// `F_λ(u)` for `u` returned by the prox of `P₀`, whose domain membership
    /// is then known.
    pub fn eval_at_prox_point(&self, u: &[f64]) -> Result<SurrogateEval> {
        let p0 = self.p0.value_at_prox_point(u);
        self.eval_with_p0(u, p0)
    }

    fn eval_with_p0(&self, x: &[f64], p0: f64) -> Result<SurrogateEval> {
        let mut value = self.f.value(x) + p0;
        let mut images = Vec::with_capacity(self.terms.len());
        let mut prox_points = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let u = t.op().apply(x);
            let (env, zeta) = t.envelope_at_image(&u)?;
            value += env;
            images.push(u);
            prox_points.push(zeta);
        }
        Ok(SurrogateEval { value, images, prox_points })
    }

    pub fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        self.f.grad(x)
    }

    /// `F_λ(u) − F_λ(x)` from evaluations at both points, accumulated term by
    /// term so that changes far below the size of `F_λ` are resolved.
    pub fn value_diff(&self, x: &[f64], ex: &SurrogateEval, u: &[f64], eu: &SurrogateEval) -> f64 {
        let mut d = self.f.value_diff(x, u) + self.p0.value_diff(x, u);
        for (i, t) in self.terms.iter().enumerate() {
            let rx = linalg::sub(&ex.images[i], &ex.prox_points[i]);
            let ru = linalg::sub(&eu.images[i], &eu.prox_points[i]);
            d += sq_norm_diff(&rx, &ru) / (2.0 * t.lambda())
                + t.penalty().value_diff(&ex.prox_points[i], &eu.prox_points[i]);
        }
        d
    }

    /// `∇h(x) − Σ (1/λ_i)A_i*ζ_i`, formed as `∇f(x) + Σ (1/λ_i)A_i*(A_i x − ζ_i)`
    /// to avoid cancelling two `O(1/λ)` quantities. `grad_f` is `∇f(x)`.
    pub fn linearization(&self, grad_f: &[f64], at: &SurrogateEval) -> Vec<f64> {
        let mut g = grad_f.to_vec();
        for ((t, u), z) in self.terms.iter().zip(&at.images).zip(&at.prox_points) {
            let r = linalg::sub(u, z);
            axpy(1.0 / t.lambda(), &t.op().adjoint(&r), &mut g);
        }
        g
    }
}

impl SurrogateProblem {
    /// `sᵀ(∇h(x) − ∇h(x − s))` given `∇f(x) − ∇f(x − s)`.
    pub fn h_curvature(&self, s: &[f64], grad_f_diff: &[f64]) -> f64 {
        dot(s, grad_f_diff)
            + self
                .terms
                .iter()
                .map(|t| norm_sq(&t.op().apply(s)) / t.lambda())
                .sum::<f64>()
    }
}

/// `L̄·‖x_next − x_l‖`, a certified bound on the distance from zero to the
/// subdifferential of the surrogate subproblem at `x_next`.
pub fn stationarity_residual(x_l: &[f64], x_next: &[f64], l_bar: f64) -> f64 {
    l_bar * linalg::dist(x_next, x_l)
}
