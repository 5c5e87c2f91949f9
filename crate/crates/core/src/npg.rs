//! Nonmonotone proximal gradient with majorization of the concave part.
//!
//! Minimises `F = h + P − g` where `h` is smooth, `P` has a computable prox
//! and `g` is convex, linearising `g` at every iterate. A step is accepted
//! once `F(u) ≤ max(last M+1 objective values) − (c/2)‖u − x‖²`.

use crate::error::{Error, Result};
use crate::linalg::{self, norm, sub};
use crate::model::{stationarity_residual, SurrogateEval, SurrogateProblem, DEFAULT_NORM_CEILING};
use std::collections::VecDeque;

/// How the trial constant `L⁰` is chosen after the first step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BbRule {
    /// `clamp(sᵀy/‖s‖²)` unconditionally.
    #[default]
    Plain,
    /// As `Plain` when `sᵀy > 1e-12`, otherwise `clamp(L̄_prev/2)`.
    Guarded,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NpgParams {
    pub l_min: f64,
    pub l_max: f64,
    /// Backtracking factor.
    pub tau: f64,
    /// Sufficient-decrease constant.
    pub c: f64,
    /// Nonmonotone window: compare against the last `m + 1` values.
    pub m: usize,
    pub max_iter: usize,
    /// Relative objective-change stopping threshold.
    pub eps_fval: f64,
    /// Trial constant for the very first step.
    pub l_first: f64,
    pub bb_rule: BbRule,
    /// After the practical stopping test fires, keep iterating until the
    /// pair `(x_last, x_next)` also satisfies `L̄‖x_next − x_last‖ ≤ ε` and
    /// `‖x_next − x_last‖ ≤ ε`.
    pub certify: bool,
    /// Iteration cap while certifying; `max_iter` applies otherwise.
    pub certify_max_iter: usize,
    pub norm_ceiling: f64,
}

impl Default for NpgParams {
    fn default() -> Self {
        Self {
            l_min: 1e-8,
            l_max: 1e8,
            tau: 2.0,
            c: 1e-4,
            m: 4,
            max_iter: 10_000,
            eps_fval: 1e-12,
            l_first: 1.0,
            bb_rule: BbRule::Plain,
            certify: true,
            certify_max_iter: 50_000,
            norm_ceiling: DEFAULT_NORM_CEILING,
        }
    }
}

impl NpgParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.l_min > 0.0
            && self.l_max >= self.l_min
            && self.l_max.is_finite()
            && self.tau > 1.0
            && self.c > 0.0
            && self.max_iter > 0
            && self.eps_fval > 0.0
            && self.l_first > 0.0
            && self.norm_ceiling > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid NPG parameters: {self:?}")))
        }
    }

    pub fn clamp(&self, l: f64) -> f64 {
        l.min(self.l_max).max(self.l_min)
    }

    /// `ñ = max(⌈(log(L_h + c) − log L_min)/log τ⌉, 1)`: backtracks needed at
    /// most per step when `h` is `L_h`-smooth.
    pub fn backtrack_bound(&self, l_h: f64) -> usize {
        let n = ((l_h + self.c).ln() - self.l_min.ln()) / self.tau.ln();
        (n.ceil().max(1.0)) as usize
    }
}

/// Initial trial constant from the last step `s` and the change `y` in `∇h`,
/// given `sᵀy` directly.
pub fn bb_init_from_curvature(s_norm_sq: f64, sty: f64, l_prev: f64, p: &NpgParams) -> f64 {
    if s_norm_sq == 0.0 {
        return p.clamp(l_prev / 2.0);
    }
    match p.bb_rule {
        BbRule::Guarded if sty <= 1e-12 => p.clamp(l_prev / 2.0),
        _ => p.clamp(sty / s_norm_sq),
    }
}

pub fn bb_init(s: &[f64], y: &[f64], l_prev: f64, p: &NpgParams) -> f64 {
    bb_init_from_curvature(linalg::norm_sq(s), linalg::dot(s, y), l_prev, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NpgStatus {
    Converged,
    MaxIter,
}

/// One accepted step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub iteration: usize,
    /// `F` at the new iterate.
    pub objective: f64,
    /// Largest `F` in the window the step was compared against.
    pub window_max: f64,
    /// `F(u) − F(x)`, accumulated termwise.
    pub change: f64,
    /// `max window − F(u)` as used by the acceptance test; the step was
    /// accepted because this is at least `(c/2)·step_norm²`.
    pub window_gap: f64,
    pub step_norm: f64,
    pub l_bar: f64,
    pub backtracks: usize,
}

#[derive(Clone, Debug)]
pub struct NpgResult {
    pub x_last: Vec<f64>,
    /// One further step from `x_last`.
    pub x_next: Vec<f64>,
    /// Accepted constant of the step `x_last → x_next`.
    pub l_bar_last: f64,
    /// Accepted steps taken to reach `x_last`.
    pub iterations: usize,
    /// `F` at `x0` followed by `F` after every accepted step.
    pub objective_trace: Vec<f64>,
    pub steps: Vec<StepRecord>,
    pub status: NpgStatus,
    pub objective_last: f64,
    pub objective_start: f64,
    /// `F(x_last) − F(x0)`, summed from the per-step changes.
    pub change: f64,
    /// Iteration at which the relative stopping test first held.
    pub practical_stop: Option<usize>,
}

impl NpgResult {
    /// `L̄‖x_next − x_last‖`.
    pub fn residual(&self) -> f64 {
        stationarity_residual(&self.x_last, &self.x_next, self.l_bar_last)
    }

    pub fn final_step_norm(&self) -> f64 {
        linalg::dist(&self.x_next, &self.x_last)
    }

    pub fn max_backtracks(&self) -> usize {
        self.steps.iter().map(|s| s.backtracks).max().unwrap_or(0)
    }
}

/// Iterate with everything needed to take a step from it.
#[derive(Clone, Debug)]
pub struct Point {
    pub x: Vec<f64>,
    pub eval: SurrogateEval,
    pub grad_f: Vec<f64>,
}

impl Point {
    pub fn at(s: &SurrogateProblem, x: Vec<f64>) -> Result<Self> {
        let eval = s.eval(&x)?;
        let grad_f = s.grad_f(&x);
        Ok(Self { x, eval, grad_f })
    }

    fn at_prox_point(s: &SurrogateProblem, x: Vec<f64>) -> Result<Self> {
        let eval = s.eval_at_prox_point(&x)?;
        let grad_f = s.grad_f(&x);
        Ok(Self { x, eval, grad_f })
    }

    pub fn objective(&self) -> f64 {
        self.eval.value
    }
}

/// The last `M + 1` accepted objective values.
///
/// Values are also kept relative to the newest one, shifted by each accepted
/// change, so the acceptance test compares small numbers with small numbers.
#[derive(Clone, Debug)]
pub struct History {
    absolute: VecDeque<f64>,
    relative: VecDeque<f64>,
    cap: usize,
}

impl History {
    pub fn new(m: usize, first: f64) -> Self {
        Self {
            absolute: VecDeque::from([first]),
            relative: VecDeque::from([0.0]),
            cap: m + 1,
        }
    }

    /// Records the value `value = previous + change`.
    pub fn push(&mut self, value: f64, change: f64) {
        if self.absolute.len() == self.cap {
            self.absolute.pop_front();
            self.relative.pop_front();
        }
        for r in self.relative.iter_mut() {
            *r -= change;
        }
        self.absolute.push_back(value);
        self.relative.push_back(0.0);
    }

    pub fn max(&self) -> f64 {
        self.absolute.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max window − F(newest)`.
    pub fn max_relative(&self) -> f64 {
        self.relative.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Result of [`npg_step`].
#[derive(Clone, Debug)]
pub struct Step {
    pub point: Point,
    /// `L̄ = l0·τ^backtracks`.
    pub l_bar: f64,
    pub backtracks: usize,
    /// `F(u) − F(x)`.
    pub change: f64,
    /// `max window − F(u)`.
    pub window_gap: f64,
}

/// One step from `from`, the newest entry of `history`, with trial constant
/// `l0`.
///
/// Errors when the backtrack count exceeds `ñ + 5`, which indicates a wrong
/// Lipschitz bound or an inexact prox.
pub fn npg_step(
    s: &SurrogateProblem,
    from: &Point,
    l0: f64,
    history: &History,
    p: &NpgParams,
) -> Result<Step> {
    let direction = s.linearization(&from.grad_f, &from.eval);
    let reference = history.max_relative();
    let ceiling = p.backtrack_bound(s.lipschitz()) + 5;
    let mut l = l0;
    let mut backtracks = 0;
    loop {
        let trial: Vec<f64> = from
            .x
            .iter()
            .zip(&direction)
            .map(|(x, d)| x - d / l)
            .collect();
        let u = s.p0().prox(1.0 / l, &trial)?;
        let cand = Point::at_prox_point(s, u)?;
        let step_sq = linalg::dist(&cand.x, &from.x).powi(2);
        let change = s.value_diff(&from.x, &from.eval, &cand.x, &cand.eval);
        let window_gap = reference - change;
        if window_gap >= 0.5 * p.c * step_sq {
            return Ok(Step { point: cand, l_bar: l, backtracks, change, window_gap });
        }
        backtracks += 1;
        if backtracks > ceiling {
            return Err(Error::BacktrackCeiling { backtracks, ceiling });
        }
        l *= p.tau;
    }
}

/// Runs from `x0` with step tolerance `eps`.
///
/// Stops when `‖x^l − x^{l−1}‖/max(‖x^l‖, 1) < eps/L̄_{l−1}` or the relative
/// objective change drops below `eps_fval`, then takes one more step to
/// produce `x_next`. With `certify` set, iteration continues until the final
/// pair also meets the absolute tolerances, for at most `certify_max_iter`
/// steps. When the cap is hit, the lowest-objective iterate is returned with
/// one monotone step from it as `x_next`.
pub fn npg_run(s: &SurrogateProblem, x0: &[f64], eps: f64, p: &NpgParams) -> Result<NpgResult> {
    npg_run_observed(s, x0, eps, p, &mut |_| {})
}

pub fn npg_run_observed(
    s: &SurrogateProblem,
    x0: &[f64],
    eps: f64,
    p: &NpgParams,
    observer: &mut dyn FnMut(&StepRecord),
) -> Result<NpgResult> {
    p.validate()?;
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {eps}")));
    }
    let start = Point::at(s, x0.to_vec())?;
    let f0 = start.objective();
    if !f0.is_finite() {
        return Err(Error::OutsideDomain);
    }
    let mut run = Run {
        history: History::new(p.m, f0),
        trace: vec![f0],
        steps: Vec::new(),
        f0,
        change: 0.0,
    };
    let mut cur = start;
    let mut prev: Option<Point> = None;
    let mut l_prev = p.l_first;
    let mut practical_at: Option<usize> = None;
    // (iterations, F − F(x0), iterate)
    let mut best: (usize, f64, Vec<f64>) = (0, 0.0, x0.to_vec());

    let cap = if p.certify { p.certify_max_iter.max(p.max_iter) } else { p.max_iter };
    for l in 0..cap {
        let l0 = match &prev {
            None => p.clamp(p.l_first),
            Some(pp) => bb_between(s, pp, &cur, l_prev, p),
        };
        let step = npg_step(s, &cur, l0, &run.history, p)?;
        let next = step.point;
        let step_norm = linalg::dist(&next.x, &cur.x);
        let record = StepRecord {
            iteration: l + 1,
            objective: next.objective(),
            window_max: run.history.max(),
            change: step.change,
            window_gap: step.window_gap,
            step_norm,
            l_bar: step.l_bar,
            backtracks: step.backtracks,
        };
        observer(&record);
        run.steps.push(record);
        let next_norm = norm(&next.x);
        if next_norm > p.norm_ceiling {
            return Err(Error::Unbounded { norm: next_norm, ceiling: p.norm_ceiling });
        }

        if practical_at.is_some() && step_norm <= eps && step.l_bar * step_norm <= eps {
            return Ok(run.result(cur, next.x, step.l_bar, l, NpgStatus::Converged, practical_at));
        }

        let f_new = next.objective();
        run.trace.push(f_new);
        run.history.push(f_new, step.change);
        run.change += step.change;
        let small_step = step_norm / next_norm.max(1.0) < eps / step.l_bar;
        let flat = step.change.abs() / f_new.abs().max(1.0) < p.eps_fval;
        l_prev = step.l_bar;
        prev = Some(std::mem::replace(&mut cur, next));

        if run.change < best.1 {
            best = (l + 1, run.change, cur.x.clone());
        }

        if small_step || flat {
            practical_at.get_or_insert(l + 1);
            if !p.certify {
                let pp = prev.as_ref().expect("a step was just taken");
                let l0 = bb_between(s, pp, &cur, l_prev, p);
                let step = npg_step(s, &cur, l0, &run.history, p)?;
                return Ok(run.result(cur, step.point.x, step.l_bar, l + 1, NpgStatus::Converged, practical_at));
            }
        }
    }

    let (iterations, change, x_best) = best;
    let point = Point::at(s, x_best)?;
    // the window belongs to the final iterate; step from the best one monotonically
    let step = npg_step(s, &point, p.clamp(l_prev), &History::new(0, point.objective()), p)?;
    run.change = change;
    Ok(run.result(point, step.point.x, step.l_bar, iterations, NpgStatus::MaxIter, practical_at))
}

fn bb_between(s: &SurrogateProblem, prev: &Point, cur: &Point, l_prev: f64, p: &NpgParams) -> f64 {
    let sv = sub(&cur.x, &prev.x);
    let gdiff = sub(&cur.grad_f, &prev.grad_f);
    bb_init_from_curvature(linalg::norm_sq(&sv), s.h_curvature(&sv, &gdiff), l_prev, p)
}

/// Bookkeeping shared by the exits of [`npg_run_observed`].
struct Run {
    history: History,
    trace: Vec<f64>,
    steps: Vec<StepRecord>,
    f0: f64,
    change: f64,
}

impl Run {
    fn result(
        self,
        last: Point,
        x_next: Vec<f64>,
        l_bar: f64,
        iterations: usize,
        status: NpgStatus,
        practical_stop: Option<usize>,
    ) -> NpgResult {
        NpgResult {
            objective_last: last.objective(),
            x_last: last.x,
            x_next,
            l_bar_last: l_bar,
            iterations,
            objective_trace: self.trace,
            steps: self.steps,
            status,
            objective_start: self.f0,
            change: self.change,
            practical_stop,
        }
    }
}
