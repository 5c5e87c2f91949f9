//! Command-line driver for the fused-signal and sparse-low-rank experiments
//! and the envelope/smoothing sample table.

use clap::{Args, Parser, Subcommand};
use sdcam::bench::{
    emit_moreau_figure, parse_key_values, parse_list, run_fused, run_slr, summarize, summary_path,
    write_csv, Experiment, ExperimentConfig, ResultRow, Scale, Solver,
};
use sdcam::error::{Error, Result};
use sdcam::par::Execution;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sdcam", version, about = "Run the SDCAM experiments and write CSV results")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nonconvex fused regularization: SDCAM against the smoothing baselines.
    Fused(RunArgs),
    /// Sparse and low-rank approximation: SDCAM with either constraint smoothed.
    Slr(RunArgs),
    /// Samples of |x|^{1/2}, its Moreau envelope and its smoothing.
    MoreauFig(FigArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Problem sizes (n for fused, rows m for slr), e.g. 500,1000.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Seeds as a list (0,3,7) or a range (0..10).
    #[arg(long)]
    seeds: Option<String>,
    /// Solvers: sdcam, snpg7, snpg8 for fused; sdcam_r, sdcam_s for slr.
    #[arg(long)]
    solvers: Option<String>,
    /// Raw results CSV; the summary goes to <stem>_summary.csv beside it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Preset sizes, noise and seeds: paper or desk.
    #[arg(long)]
    scale: Option<String>,
    /// key = value file with any of the options above; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Keep iterating each stage until the absolute tolerances hold.
    #[arg(long)]
    certify: bool,
    /// Run cells one after another.
    #[arg(long)]
    sequential: bool,
    /// slr: column count.
    #[arg(long)]
    cols: Option<usize>,
    /// slr: rank bound.
    #[arg(long)]
    rank: Option<usize>,
    /// slr: nonzero budget as a fraction of the entries.
    #[arg(long)]
    s_fraction: Option<f64>,
}

#[derive(Args)]
struct FigArgs {
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    hi: f64,
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[arg(long, default_value = "moreau_figure.csv")]
    out: PathBuf,
}

/// Flag value if given, else the config file's, else none.
fn pick(flag: Option<String>, file: &BTreeMap<String, String>, key: &str) -> Option<String> {
    flag.or_else(|| file.get(key).cloned())
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidArgument(format!("cannot parse {key} = {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::InvalidArgument(format!("cannot parse {key} = {v:?} as a boolean"))),
    }
}

fn build_config(experiment: Experiment, a: RunArgs) -> Result<(ExperimentConfig, PathBuf)> {
    let file = match &a.config {
        Some(p) => parse_key_values(&std::fs::read_to_string(p)?)?,
        None => BTreeMap::new(),
    };
    let known = [
        "sizes", "sigma", "seeds", "solvers", "out", "scale", "certify", "sequential", "cols", "rank", "s_fraction",
    ];
    if let Some(k) = file.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Error::InvalidArgument(format!("unknown config key {k:?}")));
    }
    let scale = match pick(a.scale, &file, "scale") {
        Some(s) => Scale::parse(&s)?,
        None => Scale::default(),
    };
    let mut cfg = ExperimentConfig::preset(experiment, scale);
    if let Some(v) = pick(a.sizes, &file, "sizes") {
        cfg.sizes = parse_list(&v)?;
    }
    if let Some(v) = pick(a.sigma.map(|x| x.to_string()), &file, "sigma") {
        cfg.sigma = parse_num("sigma", &v)?;
    }
    if let Some(v) = pick(a.seeds, &file, "seeds") {
        cfg.seeds = parse_list(&v)?;
    }
    if let Some(v) = pick(a.solvers, &file, "solvers") {
        cfg.solvers = v.split(',').map(Solver::parse).collect::<Result<_>>()?;
    }
    if let Some(v) = pick(a.cols.map(|x| x.to_string()), &file, "cols") {
        cfg.slr.cols = parse_num("cols", &v)?;
    }
    if let Some(v) = pick(a.rank.map(|x| x.to_string()), &file, "rank") {
        cfg.slr.k = parse_num("rank", &v)?;
    }
    if let Some(v) = pick(a.s_fraction.map(|x| x.to_string()), &file, "s_fraction") {
        cfg.slr.s_fraction = parse_num("s_fraction", &v)?;
    }
    cfg.certify = a.certify || file.get("certify").map(|v| parse_bool("certify", v)).transpose()?.unwrap_or(false);
    let sequential =
        a.sequential || file.get("sequential").map(|v| parse_bool("sequential", v)).transpose()?.unwrap_or(false);
    if sequential {
        cfg.execution = Execution::Sequential;
    }
    let out = pick(a.out.map(|p| p.display().to_string()), &file, "out")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", experiment.id())));
    cfg.validate()?;
    Ok((cfg, out))
}

fn run(experiment: Experiment, args: RunArgs) -> Result<bool> {
    let (cfg, out) = build_config(experiment, args)?;
    let rows: Vec<ResultRow> = match experiment {
        Experiment::Fused => run_fused(&cfg)?,
        _ => run_slr(&cfg)?,
    };
    write_csv(&out, &rows)?;
    let summary = summarize(&rows);
    let summary_out = summary_path(&out);
    write_csv(&summary_out, &summary)?;
    for s in &summary {
        println!(
            "{} size={} solver={} runs={} failed={} iter={} fval={}{}",
            s.experiment,
            s.size,
            s.solver,
            s.runs,
            s.failed,
            s.iter.map_or("-".into(), |v| format!("{v:.1}")),
            s.fval.map_or("-".into(), |v| format!("{v:.6e}")),
            s.vio.map_or(String::new(), |v| format!(" vio={v:.4e}")),
        );
    }
    println!("wrote {} and {}", out.display(), summary_out.display());
    let mut ok = true;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("cell size={} seed={} solver={} failed: {}", r.size, r.seed, r.solver, r.error.as_deref().unwrap_or(""));
        ok = false;
    }
    Ok(ok)
}

fn figure(a: FigArgs) -> Result<bool> {
    let rows = emit_moreau_figure(a.lambda, a.lo, a.hi, a.points)?;
    write_csv(&a.out, &rows)?;
    println!("wrote {} ({} rows)", a.out.display(), rows.len());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Fused(a) => run(Experiment::Fused, a),
        Command::Slr(a) => run(Experiment::Slr, a),
        Command::MoreauFig(a) => figure(a),
    };
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
