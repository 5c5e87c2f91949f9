//! Moreau envelopes `e_λP(Ax)` and their difference-of-convex form
//! `e_λP(u) = ‖u‖²/(2λ) − D_{λ,P}(u)`.

use crate::error::{Error, Result};
use crate::linalg::{self, norm_sq};
use crate::model::LinearOp;
use crate::prox::ProxFriendly;
use std::sync::Arc;

/// A penalty `P`, the linear map `A` it is composed with, and the smoothing
/// parameter `λ`.
#[derive(Clone, Debug)]
pub struct MoreauTerm {
    penalty: Arc<dyn ProxFriendly>,
    op: Arc<dyn LinearOp>,
    lambda: f64,
}

impl MoreauTerm {
    pub fn new(penalty: Arc<dyn ProxFriendly>, op: Arc<dyn LinearOp>, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "smoothing parameter must be positive, got {lambda}"
            )));
        }
        if let Some(d) = penalty.dim() {
            if d != op.out_dim() {
                return Err(Error::Dimension(format!(
                    "operator maps into ℝ^{} but the penalty lives on ℝ^{d}",
                    op.out_dim()
                )));
            }
        }
        Ok(Self { penalty, op, lambda })
    }

    pub fn penalty(&self) -> &Arc<dyn ProxFriendly> {
        &self.penalty
    }

    pub fn op(&self) -> &Arc<dyn LinearOp> {
        &self.op
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `(e_λP(u), prox_{λP}(u))` for an image point `u = Ax`.
    pub fn envelope_at_image(&self, u: &[f64]) -> Result<(f64, Vec<f64>)> {
        let zeta = self.penalty.prox(self.lambda, u)?;
        let value = linalg::dist(u, &zeta).powi(2) / (2.0 * self.lambda)
            + self.penalty.value_at_prox_point(&zeta);
        Ok((value, zeta))
    }

    /// `e_λP(Ax)`.
    pub fn moreau_value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.envelope_at_image(&self.op.apply(x))?.0)
    }

    /// `(‖Ax‖²/(2λ), D_{λ,P}(Ax))`, with `D` taken as the quadratic minus the
    /// envelope.
    pub fn dc_split(&self, x: &[f64]) -> Result<(f64, f64)> {
        let u = self.op.apply(x);
        let quadratic = norm_sq(&u) / (2.0 * self.lambda);
        let (env, _) = self.envelope_at_image(&u)?;
        Ok((quadratic, quadratic - env))
    }

    /// `(ζ, (1/λ)A*ζ)` with `ζ = prox_{λP}(Ax)`; the second component is a
    /// subgradient of `D_{λ,P}∘A` at `x`.
    pub fn concave_subgrad(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let zeta = self.penalty.prox(self.lambda, &self.op.apply(x))?;
        let g = linalg::scale(1.0 / self.lambda, &self.op.adjoint(&zeta));
        Ok((zeta, g))
    }
}
