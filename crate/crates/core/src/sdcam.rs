//! Outer solvers: SDCAM, which drives the inner method over a decreasing
//! smoothing schedule, and the smoothing baseline sNPG for the fused problem.

use crate::error::{Error, Result};
use crate::linalg::{self, norm_sq};
use crate::model::{CompositeProblem, FirstDifference, LinearOp, SmoothFn};
use crate::npg::{npg_run, BbRule, NpgParams, NpgStatus};
use crate::problems::{build_fused, FusedConfig};
use crate::prox::{L1Box, L1Norm, ProxFriendly};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdcamParams {
    pub lambda0: f64,
    pub lambda_decay: f64,
    /// Stages run while `λ_t ≥ lambda_stop`.
    pub lambda_stop: f64,
    pub eps0: f64,
    pub eps_decay: f64,
    pub eps_floor: f64,
    pub npg: NpgParams,
}

impl Default for SdcamParams {
    fn default() -> Self {
        Self {
            lambda0: 0.1,
            lambda_decay: 0.1,
            lambda_stop: 1e-9,
            eps0: 1e-5,
            eps_decay: 1.5,
            eps_floor: 1e-6,
            npg: NpgParams::default(),
        }
    }
}

impl SdcamParams {
    /// Settings of the smoothing baseline: guarded BB, no certification, and
    /// stages down to `lambda_stop`.
    pub fn snpg(lambda_stop: f64) -> Self {
        let d = Self::default();
        Self {
            lambda_stop,
            npg: NpgParams { bb_rule: BbRule::Guarded, certify: false, ..d.npg },
            ..d
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.lambda0 > 0.0
            && self.lambda_decay > 0.0
            && self.lambda_decay < 1.0
            && self.lambda_stop > 0.0
            && self.eps0 > 0.0
            && self.eps_decay > 1.0
            && self.eps_floor > 0.0;
        if !ok {
            return Err(Error::InvalidArgument(format!("invalid outer parameters: {self:?}")));
        }
        self.npg.validate()
    }

    /// `(λ_t, ε_t)` for every stage, in order.
    pub fn schedule(&self) -> Vec<(f64, f64)> {
        // tolerance absorbs the rounding in λ₀·decayᵗ so that a stop equal to
        // a schedule value includes that stage
        let stop = self.lambda_stop * (1.0 - 1e-9);
        let mut out = Vec::new();
        let mut eps = self.eps0;
        let mut t = 0;
        loop {
            let lambda = self.lambda0 * self.lambda_decay.powi(t);
            if lambda < stop {
                return out;
            }
            out.push((lambda, eps));
            eps = (eps / self.eps_decay).max(self.eps_floor);
            t += 1;
        }
    }
}

/// The three stopping clauses checked for the pair returned by the inner run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Certification {
    /// `L̄‖x_next − x_last‖ ≤ ε_t`.
    pub residual: bool,
    /// `‖x_next − x_last‖ ≤ ε_t`.
    pub step: bool,
    /// `F_λ(x_last) ≤ F_λ(x^{t,0})`.
    pub descent: bool,
}

impl Certification {
    pub fn all(&self) -> bool {
        self.residual && self.step && self.descent
    }
}

/// One outer stage.
#[derive(Clone, Debug, PartialEq)]
pub struct OuterRecord {
    pub stage: usize,
    pub lambda: f64,
    pub eps: f64,
    /// The stage restarted from `x_feas` because `x^t` was worse there.
    pub safeguard_triggered: bool,
    /// `F_λ` at the stage's starting point.
    pub start_objective_lambda: f64,
    /// `F_λ` at the stage output, i.e. `F_{λ_t}(x^{t+1})`.
    pub objective_lambda: f64,
    /// True objective at the stage output.
    pub objective: f64,
    pub residual: f64,
    pub step_norm: f64,
    pub inner_iterations: usize,
    pub inner_status: NpgStatus,
    pub certification: Certification,
    /// `dist(A_i x^{t+1}, dom P_i)` per term.
    pub feasibility: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SdcamReport {
    pub x_final: Vec<f64>,
    pub outer_iterations: usize,
    pub total_inner_iterations: usize,
    pub per_outer: Vec<OuterRecord>,
    /// `dist(A_i x_final, dom P_i)` per term.
    pub feasibility: Vec<f64>,
    /// `F(x_final)`.
    pub objective: f64,
    /// `F(x_feas)`.
    pub objective_feas: f64,
    /// The run ended through the custom stopping rule.
    pub stopped_early: bool,
}

impl SdcamReport {
    /// Stages whose output violates `F_{λ_t}(x^{t+1}) ≤ F(x_feas)`.
    pub fn safeguard_violations(&self) -> Vec<usize> {
        self.per_outer
            .iter()
            .filter(|r| r.objective_lambda > self.objective_feas)
            .map(|r| r.stage)
            .collect()
    }

    pub fn all_certified(&self) -> bool {
        self.per_outer.iter().all(|r| r.certification.all())
    }

    pub fn max_feasibility(&self) -> f64 {
        self.feasibility.iter().copied().fold(0.0, f64::max)
    }
}

/// Extra stopping rule checked after every stage with the stage output.
pub type StopRule<'a> = &'a dyn Fn(&[f64], &OuterRecord) -> bool;

pub fn sdcam_run(
    problem: &CompositeProblem,
    x0: Option<&[f64]>,
    params: &SdcamParams,
    custom_stop: Option<StopRule>,
) -> Result<SdcamReport> {
    sdcam_run_observed(problem, x0, params, custom_stop, &mut |_| {})
}

/// As [`sdcam_run`], calling `observer` after every stage.
pub fn sdcam_run_observed(
    problem: &CompositeProblem,
    x0: Option<&[f64]>,
    params: &SdcamParams,
    custom_stop: Option<StopRule>,
    observer: &mut dyn FnMut(&OuterRecord),
) -> Result<SdcamReport> {
    params.validate()?;
    let x_feas = problem.x_feas();
    let mut x = x0.unwrap_or(x_feas).to_vec();
    if x.len() != problem.dim() {
        return Err(Error::Dimension(format!(
            "start has length {}, problem has dimension {}",
            x.len(),
            problem.dim()
        )));
    }
    if !problem.p0().in_domain(&x) {
        return Err(Error::OutsideDomain);
    }
    let npg = NpgParams {
        norm_ceiling: params.npg.norm_ceiling.min(problem.norm_ceiling()),
        ..params.npg
    };
    let m = problem.terms().len();
    let mut records: Vec<OuterRecord> = Vec::new();
    let mut total = 0;
    let mut stopped_early = false;

    for (stage, (lambda, eps)) in params.schedule().into_iter().enumerate() {
        let s = problem.surrogate(&vec![lambda; m])?;
        let at_x = s.eval(&x)?.value;
        let at_feas = s.eval(x_feas)?.value;
        let safeguard_triggered = !(at_x <= at_feas);
        let (start, start_objective_lambda) = if safeguard_triggered {
            (x_feas.to_vec(), at_feas)
        } else {
            (x, at_x)
        };
        let inner = npg_run(&s, &start, eps, &npg)?;
        let residual = inner.residual();
        let step_norm = inner.final_step_norm();
        let record = OuterRecord {
            stage,
            lambda,
            eps,
            safeguard_triggered,
            start_objective_lambda,
            objective_lambda: inner.objective_last,
            objective: problem.eval_objective(&inner.x_last),
            residual,
            step_norm,
            inner_iterations: inner.iterations,
            inner_status: inner.status,
            certification: Certification {
                residual: residual <= eps,
                step: step_norm <= eps,
                descent: inner.change <= 0.0,
            },
            feasibility: problem.feasibility(&inner.x_last)?,
        };
        x = inner.x_last;
        total += record.inner_iterations;
        observer(&record);
        let stop = custom_stop.is_some_and(|f| f(&x, &record));
        records.push(record);
        // without envelope terms λ plays no role and one stage suffices
        if stop || m == 0 {
            stopped_early = stop;
            break;
        }
    }

    Ok(SdcamReport {
        objective: problem.eval_objective(&x),
        objective_feas: problem.eval_objective(x_feas),
        feasibility: problem.feasibility(&x)?,
        x_final: x,
        outer_iterations: records.len(),
        total_inner_iterations: total,
        per_outer: records,
        stopped_early,
    })
}

/// `base^{p/2}`, with a root-based path for `p = 1/2`.
fn half_pow(base: f64, p: f64) -> f64 {
    if p == 0.5 {
        base.sqrt().sqrt()
    } else {
        base.powf(0.5 * p)
    }
}

/// `(t_u² + λ²)^{p/2} − (t_x² + λ²)^{p/2}` without cancellation.
fn half_pow_diff(tx: f64, tu: f64, lam_sq: f64, p: f64) -> f64 {
    if tx == tu {
        return 0.0;
    }
    let bx = tx * tx + lam_sq;
    let bu = tu * tu + lam_sq;
    let delta = (tu - tx) * (tu + tx);
    if p == 0.5 {
        let (rx, ru) = (bx.sqrt(), bu.sqrt());
        delta / (rx + ru) / (rx.sqrt() + ru.sqrt())
    } else {
        half_pow(bx, p) * (0.5 * p * (delta / bx).ln_1p()).exp_m1()
    }
}

/// `c₂ Σ ((Dx)_i² + λ²)^{p/2}` and its gradient.
pub fn smoothed_tv(x: &[f64], lambda: f64, p: f64, c2: f64) -> (f64, Vec<f64>) {
    let d = FirstDifference { n: x.len() };
    let dx = d.apply(x);
    let lam_sq = lambda * lambda;
    let mut value = 0.0;
    let w: Vec<f64> = dx
        .iter()
        .map(|&t| {
            let base = t * t + lam_sq;
            let pow = half_pow(base, p);
            value += pow;
            t * pow / base
        })
        .collect();
    let grad = linalg::scale(c2 * p, &d.adjoint(&w));
    (c2 * value, grad)
}

/// `½‖x − b‖² + c₂ Σ ((Dx)_i² + λ²)^{p/2}`, the smooth part of an sNPG stage.
#[derive(Clone, Debug)]
pub struct SmoothedFused {
    pub b: Vec<f64>,
    pub c2: f64,
    pub p: f64,
    pub lambda: f64,
}

impl SmoothFn for SmoothedFused {
    fn dim(&self) -> usize {
        self.b.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * linalg::dist(x, &self.b).powi(2) + smoothed_tv(x, self.lambda, self.p, self.c2).0
    }
    fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = smoothed_tv(x, self.lambda, self.p, self.c2).1;
        linalg::axpy(1.0, &linalg::sub(x, &self.b), &mut g);
        g
    }
    /// `1 + 4c₂pλ^{p−2}`: `‖D‖² ≤ 4` times the largest second derivative of
    /// `t ↦ (t² + λ²)^{p/2}`, attained at `t = 0`.
    fn lipschitz(&self) -> f64 {
        1.0 + 4.0 * self.c2 * self.p * self.lambda.powf(self.p - 2.0)
    }
    fn value_diff(&self, x: &[f64], u: &[f64]) -> f64 {
        let data: f64 = x
            .iter()
            .zip(u)
            .zip(&self.b)
            .map(|((a, c), b)| (c - a) * (c + a - 2.0 * b))
            .sum();
        let d = FirstDifference { n: x.len() };
        let lam_sq = self.lambda * self.lambda;
        let tv: f64 = d
            .apply(x)
            .iter()
            .zip(d.apply(u))
            .map(|(&tx, tu)| half_pow_diff(tx, tu, lam_sq, self.p))
            .sum();
        0.5 * data + self.c2 * tv
    }
}

/// Smoothing continuation for the fused problem: each stage minimises
/// `SmoothedFused + c₁‖·‖₁` from the previous stage's output.
///
/// The report's `objective_lambda` fields hold the smoothed objective; the
/// `objective` fields hold the true fused objective.
pub fn snpg_run(cfg: &FusedConfig, params: &SdcamParams) -> Result<SdcamReport> {
    params.validate()?;
    let problem = build_fused(cfg)?;
    let p0: Arc<dyn ProxFriendly> = match cfg.tau {
        Some(tau) => Arc::new(L1Box { weight: cfg.c1, tau }),
        None => Arc::new(L1Norm { weight: cfg.c1 }),
    };
    let mut x = problem.x_feas().to_vec();
    let mut records = Vec::new();
    let mut total = 0;
    for (stage, (lambda, eps)) in params.schedule().into_iter().enumerate() {
        let f = SmoothedFused { b: cfg.b.clone(), c2: cfg.c2, p: cfg.p, lambda };
        let s = CompositeProblem::new(Arc::new(f), p0.clone(), vec![], x.clone())?
            .with_norm_ceiling(problem.norm_ceiling())
            .surrogate(&[])?;
        let start_objective_lambda = s.eval(&x)?.value;
        let inner = npg_run(&s, &x, eps, &params.npg)?;
        let residual = inner.residual();
        let step_norm = inner.final_step_norm();
        let record = OuterRecord {
            stage,
            lambda,
            eps,
            safeguard_triggered: false,
            start_objective_lambda,
            objective_lambda: inner.objective_last,
            objective: problem.eval_objective(&inner.x_last),
            residual,
            step_norm,
            inner_iterations: inner.iterations,
            inner_status: inner.status,
            certification: Certification {
                residual: residual <= eps,
                step: step_norm <= eps,
                descent: inner.change <= 0.0,
            },
            feasibility: problem.feasibility(&inner.x_last)?,
        };
        x = inner.x_last;
        total += record.inner_iterations;
        records.push(record);
    }
    Ok(SdcamReport {
        objective: problem.eval_objective(&x),
        objective_feas: problem.eval_objective(problem.x_feas()),
        feasibility: problem.feasibility(&x)?,
        x_final: x,
        outer_iterations: records.len(),
        total_inner_iterations: total,
        per_outer: records,
        stopped_early: false,
    })
}

/// `dist(A_i x, dom P_i)` bound implied by the safeguard:
/// `sqrt(2λ(F(x_feas) − lower))` for a lower bound `lower` of `f + P₀`.
pub fn feasibility_bound(lambda: f64, objective_feas: f64, lower: f64) -> f64 {
    (2.0 * lambda * (objective_feas - lower).max(0.0)).sqrt()
}

/// `‖X‖_F` of a row-major matrix stored as a vector.
pub fn frobenius(x: &[f64]) -> f64 {
    norm_sq(x).sqrt()
}
