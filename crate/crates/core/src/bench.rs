//! Experiment harness: seeded data generators, the fused-signal and
//! sparse-low-rank experiments, the envelope/smoothing comparison table and
//! CSV output.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so a seed
//! yields the same data on every platform.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::model::{CompositeProblem, Identity};
use crate::moreau::MoreauTerm;
use crate::par::Execution;
use crate::problems::{build_fused, build_slr, FusedConfig, SlrConfig, Split};
use crate::prox::{HalfPower, ProxFriendly};
use crate::sdcam::{frobenius, sdcam_run, snpg_run, OuterRecord, SdcamParams, SdcamReport};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

/// A generated fused-signal instance.
#[derive(Clone, Debug, PartialEq)]
pub struct FusedSignal {
    pub x_true: Vec<f64>,
    pub b: Vec<f64>,
    /// `c₁ = c₂ = σ√n/40`.
    pub c: f64,
}

/// Piecewise-constant signal with six blocks plus Gaussian noise.
///
/// Six anchors are drawn from `{1, …, 10}` without replacement and sorted.
/// Block `i` covers the 1-based positions `n·I_i/10 − 3n/50 − u ..= n·I_i/10`
/// (`u` uniform in `{1,2,3}`, start floored at 1) and takes the value `±v`
/// (`v` uniform in `{1,2,3}`, sign from a standard normal draw). Later blocks
/// overwrite earlier ones where they overlap.
pub fn gen_fused_signal(n: usize, sigma: f64, seed: u64) -> Result<FusedSignal> {
    if n == 0 || !n.is_multiple_of(50) {
        return Err(Error::InvalidArgument(format!("signal length must be a positive multiple of 50, got {n}")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise level must be nonnegative, got {sigma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (1..=10).collect();
    perm.shuffle(&mut rng);
    let mut anchors = perm[..6].to_vec();
    anchors.sort_unstable();

    let mut x = vec![0.0; n];
    for &a in &anchors {
        let positive = rng.sample::<f64, _>(StandardNormal) > 0.0;
        let u = rng.random_range(1..=3usize);
        let v = rng.random_range(1..=3) as f64;
        let end = n * a / 10;
        let start = (end as isize - (3 * n / 50) as isize - u as isize).max(1) as usize;
        let value = if positive { v } else { -v };
        x[start - 1..end].fill(value);
    }
    let b = x
        .iter()
        .map(|&xi| xi + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok(FusedSignal { x_true: x, b, c: sigma * (n as f64).sqrt() / 40.0 })
}

/// `M = M₁M₂ + σΔ` with `M₁` (m×k) and `M₂` (k×n) standard Gaussian and
/// `m/10` rows of `M₁` zeroed.
pub fn gen_slr(m: usize, n: usize, k: usize, sigma: f64, seed: u64) -> Result<DenseMatrix> {
    if m == 0 || !m.is_multiple_of(10) {
        return Err(Error::InvalidArgument(format!("row count must be a positive multiple of 10, got {m}")));
    }
    if n == 0 || k == 0 || k > m.min(n) {
        return Err(Error::InvalidArgument(format!("need 1 ≤ k ≤ min(m, n), got k={k} for {m}x{n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = |_: usize, _: usize| rng.sample::<f64, _>(StandardNormal);
    let mut m1 = DenseMatrix::from_fn(m, k, &mut normal);
    let m2 = DenseMatrix::from_fn(k, n, &mut normal);
    let noise = DenseMatrix::from_fn(m, n, &mut normal);
    let mut rows: Vec<usize> = (0..m).collect();
    rows.shuffle(&mut rng);
    for &r in &rows[..m / 10] {
        for j in 0..k {
            m1.set(r, j, 0.0);
        }
    }
    let mut out = m1.matmul(&m2);
    for (o, d) in out.as_mut_slice().iter_mut().zip(noise.as_slice()) {
        *o += sigma * d;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Fused,
    Slr,
    MoreauFigure,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Experiment::Fused => "fused",
            Experiment::Slr => "slr",
            Experiment::MoreauFigure => "moreau_figure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solver {
    Sdcam,
    Snpg7,
    Snpg8,
    SdcamR,
    SdcamS,
}

impl Solver {
    pub const FUSED: [Solver; 3] = [Solver::Sdcam, Solver::Snpg7, Solver::Snpg8];
    pub const SLR: [Solver; 2] = [Solver::SdcamR, Solver::SdcamS];

    pub fn id(self) -> &'static str {
        match self {
            Solver::Sdcam => "sdcam",
            Solver::Snpg7 => "snpg7",
            Solver::Snpg8 => "snpg8",
            Solver::SdcamR => "sdcam_r",
            Solver::SdcamS => "sdcam_s",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [Solver::Sdcam, Solver::Snpg7, Solver::Snpg8, Solver::SdcamR, Solver::SdcamS]
            .into_iter()
            .find(|v| v.id() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown solver {s:?}")))
    }

    fn serves(self, e: Experiment) -> bool {
        match e {
            Experiment::Fused => Self::FUSED.contains(&self),
            Experiment::Slr => Self::SLR.contains(&self),
            Experiment::MoreauFigure => false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scale {
    Paper,
    #[default]
    Desk,
}

impl Scale {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" => Ok(Scale::Paper),
            "desk" => Ok(Scale::Desk),
            _ => Err(Error::InvalidArgument(format!("unknown scale {s:?}, expected paper or desk"))),
        }
    }
}

/// Shape of the sparse-low-rank instances: `m×cols` with rank bound `k` and
/// at most `round(s_fraction·m·cols)` nonzeros.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlrShape {
    pub cols: usize,
    pub k: usize,
    pub s_fraction: f64,
}

/// Nonzero budget of the sparse-low-rank runs: room for every entry outside
/// the zeroed tenth of the rows.
pub const SLR_S_FRACTION: f64 = 0.9;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// `n` for the fused experiment, the row count `m` for sparse-low-rank.
    pub sizes: Vec<usize>,
    pub sigma: f64,
    pub seeds: Vec<u64>,
    pub solvers: Vec<Solver>,
    pub slr: SlrShape,
    /// Run the inner solver until the absolute stationarity tolerances hold,
    /// not just the relative stopping test.
    pub certify: bool,
    pub execution: Execution,
}

impl ExperimentConfig {
    /// Preset sizes, noise and seeds for an experiment at a scale.
    pub fn preset(experiment: Experiment, scale: Scale) -> Self {
        let (sizes, sigma, seeds, solvers, slr) = match (experiment, scale) {
            (Experiment::Slr, Scale::Paper) => (vec![1000], 0.005, 10, Solver::SLR.to_vec(), (500, 10)),
            (Experiment::Slr, Scale::Desk) => (vec![200], 0.005, 3, Solver::SLR.to_vec(), (100, 5)),
            (_, Scale::Paper) => (vec![2000], 0.1, 10, Solver::FUSED.to_vec(), (500, 10)),
            (_, Scale::Desk) => (vec![500], 0.1, 3, Solver::FUSED.to_vec(), (100, 5)),
        };
        Self {
            experiment,
            sizes,
            sigma,
            seeds: (0..seeds).collect(),
            solvers,
            slr: SlrShape { cols: slr.0, k: slr.1, s_fraction: SLR_S_FRACTION },
            certify: false,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.sizes.is_empty() || self.seeds.is_empty() || self.solvers.is_empty() {
            return Err(Error::InvalidArgument("sizes, seeds and solvers must be nonempty".into()));
        }
        for &size in &self.sizes {
            match self.experiment {
                Experiment::Fused if size == 0 || size % 50 != 0 => {
                    return Err(Error::InvalidArgument(format!("fused sizes must be multiples of 50, got {size}")))
                }
                Experiment::Slr if size < 10 || size % 10 != 0 => {
                    return Err(Error::InvalidArgument(format!("slr sizes must be multiples of 10, got {size}")))
                }
                _ => {}
            }
        }
        if let Some(s) = self.solvers.iter().find(|s| !s.serves(self.experiment)) {
            return Err(Error::InvalidArgument(format!(
                "solver {} does not apply to the {} experiment",
                s.id(),
                self.experiment.id()
            )));
        }
        if !(self.slr.s_fraction > 0.0 && self.slr.s_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!("s fraction must lie in (0, 1], got {}", self.slr.s_fraction)));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, u64, Solver)> {
        let mut out = Vec::new();
        for &size in &self.sizes {
            for &seed in &self.seeds {
                for &solver in &self.solvers {
                    out.push((size, seed, solver));
                }
            }
        }
        out
    }
}

/// One (size, seed, solver) cell. A failed cell keeps its key and the error
/// message, with empty measurements.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub size: usize,
    pub sigma: f64,
    pub seed: u64,
    pub solver: String,
    pub iter: Option<usize>,
    pub cpu_seconds: Option<f64>,
    pub fval: Option<f64>,
    pub vio: Option<f64>,
    #[serde(skip)]
    pub error: Option<String>,
}

impl ResultRow {
    fn new(e: Experiment, size: usize, sigma: f64, seed: u64, solver: Solver) -> Self {
        Self {
            experiment: e.id().into(),
            size,
            sigma,
            seed,
            solver: solver.id().into(),
            iter: None,
            cpu_seconds: None,
            fval: None,
            vio: None,
            error: None,
        }
    }

    fn fill(mut self, out: Result<(usize, f64, f64, Option<f64>)>) -> Self {
        match out {
            Ok((iter, cpu, fval, vio)) => {
                self.iter = Some(iter);
                self.cpu_seconds = Some(cpu);
                self.fval = Some(fval);
                self.vio = vio;
            }
            Err(e) => self.error = Some(e.to_string()),
        }
        self
    }
}

/// Outer parameters of a fused-experiment solver.
pub fn fused_params(solver: Solver, certify: bool) -> SdcamParams {
    let mut p = match solver {
        Solver::Snpg7 => SdcamParams::snpg(1e-7),
        Solver::Snpg8 => SdcamParams::snpg(1e-8),
        _ => SdcamParams::default(),
    };
    if solver == Solver::Sdcam {
        p.npg.certify = certify;
    }
    p
}

/// Runs one fused solver on `(n, σ, seed)` data and returns its report.
pub fn fused_cell(n: usize, sigma: f64, seed: u64, solver: Solver, certify: bool) -> Result<SdcamReport> {
    let signal = gen_fused_signal(n, sigma, seed)?;
    let cfg = FusedConfig::new(signal.b, signal.c, signal.c);
    let params = fused_params(solver, certify);
    match solver {
        Solver::Sdcam => sdcam_run(&build_fused(&cfg)?, None, &params, None),
        Solver::Snpg7 | Solver::Snpg8 => snpg_run(&cfg, &params),
        _ => Err(Error::InvalidArgument(format!("{} is not a fused solver", solver.id()))),
    }
}

/// The sparse-low-rank problem for one split, and its stopping rule
/// `dist ≤ 1e-6·‖X‖_F` on the smoothed constraint.
pub fn slr_problem(mat: DenseMatrix, shape: &SlrShape, solver: Solver) -> Result<CompositeProblem> {
    let split = match solver {
        Solver::SdcamR => Split::R,
        Solver::SdcamS => Split::S,
        _ => return Err(Error::InvalidArgument(format!("{} is not a sparse-low-rank solver", solver.id()))),
    };
    let (m, n) = mat.shape();
    let s = ((shape.s_fraction * (m * n) as f64).round() as usize).max(1);
    build_slr(&SlrConfig { m: mat, s, k: shape.k, split })
}

pub fn slr_stop(x: &[f64], r: &OuterRecord) -> bool {
    r.feasibility[0] <= 1e-6 * frobenius(x)
}

/// Runs one split on `gen_slr(m, cols, k, σ, seed)` and returns the problem
/// with its report.
pub fn slr_cell(
    m: usize,
    shape: &SlrShape,
    sigma: f64,
    seed: u64,
    solver: Solver,
    certify: bool,
) -> Result<(CompositeProblem, SdcamReport)> {
    let mat = gen_slr(m, shape.cols, shape.k, sigma, seed)?;
    let problem = slr_problem(mat, shape, solver)?;
    let mut params = SdcamParams::default();
    params.npg.certify = certify;
    let report = sdcam_run(&problem, None, &params, Some(&slr_stop))?;
    Ok((problem, report))
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let out = f()?;
    Ok((out, t.elapsed().as_secs_f64()))
}

/// One row per (size, seed, solver); failures are recorded in their row.
pub fn run_fused(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    expect(cfg, Experiment::Fused)?;
    Ok(cfg.execution.map(cfg.cells(), |(n, seed, solver)| {
        let row = ResultRow::new(Experiment::Fused, n, cfg.sigma, seed, solver);
        let out = gen_fused_signal(n, cfg.sigma, seed).and_then(|_| {
            let (report, cpu) = timed(|| fused_cell(n, cfg.sigma, seed, solver, cfg.certify))?;
            Ok((report.total_inner_iterations, cpu, report.objective, None))
        });
        row.fill(out)
    }))
}

/// As [`run_fused`]; `fval` is `½‖X − M‖_F²` and `vio` the terminal distance
/// to the smoothed constraint.
pub fn run_slr(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    expect(cfg, Experiment::Slr)?;
    Ok(cfg.execution.map(cfg.cells(), |(m, seed, solver)| {
        let row = ResultRow::new(Experiment::Slr, m, cfg.sigma, seed, solver);
        let out = gen_slr(m, cfg.slr.cols, cfg.slr.k, cfg.sigma, seed).and_then(|mat| {
            let problem = slr_problem(mat, &cfg.slr, solver)?;
            let mut params = SdcamParams::default();
            params.npg.certify = cfg.certify;
            let (report, cpu) = timed(|| sdcam_run(&problem, None, &params, Some(&slr_stop)))?;
            let fval = problem.f().value(&report.x_final);
            Ok((report.total_inner_iterations, cpu, fval, Some(report.max_feasibility())))
        });
        row.fill(out)
    }))
}

fn expect(cfg: &ExperimentConfig, e: Experiment) -> Result<()> {
    if cfg.experiment != e {
        return Err(Error::InvalidArgument(format!(
            "config is for the {} experiment, not {}",
            cfg.experiment.id(),
            e.id()
        )));
    }
    cfg.validate()
}

/// Means over the successful rows of each (experiment, size, sigma, solver).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub size: usize,
    pub sigma: f64,
    pub solver: String,
    pub runs: usize,
    pub failed: usize,
    pub iter: Option<f64>,
    pub cpu_seconds: Option<f64>,
    pub fval: Option<f64>,
    pub vio: Option<f64>,
}

pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut groups: Vec<SummaryRow> = Vec::new();
    let mut sums: Vec<[f64; 4]> = Vec::new();
    let mut vio_count: Vec<usize> = Vec::new();
    for r in rows {
        let idx = match groups.iter().position(|g| {
            g.experiment == r.experiment && g.size == r.size && g.sigma == r.sigma && g.solver == r.solver
        }) {
            Some(i) => i,
            None => {
                groups.push(SummaryRow {
                    experiment: r.experiment.clone(),
                    size: r.size,
                    sigma: r.sigma,
                    solver: r.solver.clone(),
                    runs: 0,
                    failed: 0,
                    iter: None,
                    cpu_seconds: None,
                    fval: None,
                    vio: None,
                });
                sums.push([0.0; 4]);
                vio_count.push(0);
                groups.len() - 1
            }
        };
        let (Some(iter), Some(cpu), Some(fval)) = (r.iter, r.cpu_seconds, r.fval) else {
            groups[idx].failed += 1;
            continue;
        };
        groups[idx].runs += 1;
        let s = &mut sums[idx];
        s[0] += iter as f64;
        s[1] += cpu;
        s[2] += fval;
        if let Some(v) = r.vio {
            s[3] += v;
            vio_count[idx] += 1;
        }
    }
    for ((g, s), nv) in groups.iter_mut().zip(&sums).zip(&vio_count) {
        if g.runs > 0 {
            let k = g.runs as f64;
            g.iter = Some(s[0] / k);
            g.cpu_seconds = Some(s[1] / k);
            g.fval = Some(s[2] / k);
        }
        if *nv > 0 {
            g.vio = Some(s[3] / *nv as f64);
        }
    }
    groups
}

/// Writes any serializable rows as CSV with a header.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `<stem>_summary.<ext>` next to `path`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_summary.{ext}"),
        None => format!("{stem}_summary"),
    };
    path.with_file_name(name)
}

/// A sample of `|x|^{1/2}`, its Moreau envelope and its smoothing
/// `(x² + λ²)^{1/4}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FigureRow {
    pub x: f64,
    pub f: f64,
    pub envelope: f64,
    pub smoothing: f64,
    /// `prox_{λf}(x) = x`.
    pub prox_fixed: bool,
}

/// `points` evenly spaced samples over `[lo, hi]`.
pub fn emit_moreau_figure(lambda: f64, lo: f64, hi: f64, points: usize) -> Result<Vec<FigureRow>> {
    if !(lo < hi) || points < 2 {
        return Err(Error::InvalidArgument(format!("need lo < hi and at least 2 points, got [{lo}, {hi}] with {points}")));
    }
    let penalty = Arc::new(HalfPower { weight: 1.0 });
    let term = MoreauTerm::new(penalty.clone(), Arc::new(Identity { n: 1 }), lambda)?;
    (0..points)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let (envelope, zeta) = term.envelope_at_image(&[x])?;
            Ok(FigureRow {
                x,
                f: penalty.value(&[x]),
                envelope,
                smoothing: (x * x + lambda * lambda).sqrt().sqrt(),
                prox_fixed: zeta[0] == x,
            })
        })
        .collect()
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidArgument(format!("config line {}: expected key = value", i + 1)));
        };
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Comma-separated list, or a half-open range `a..b`.
pub fn parse_list<T>(s: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr + TryFrom<u64>,
{
    let bad = || Error::InvalidArgument(format!("cannot parse list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return (a..b).map(|v| T::try_from(v).map_err(|_| bad())).collect();
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}
