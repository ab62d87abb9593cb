//! Command-line front end. Single-shot commands print JSON lines on stdout;
//! failures print one JSON error line on stderr and exit with status 1. Usage
//! errors exit with status 2.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dtm::{denoise, dtm_batch, DtmParams, EmpiricalMeasure};
use crate::geometry::RingSpec;
use crate::harness::{run_property_suite, run_table_with, ExperimentConfig, MethodName, TableOptions};
use crate::io::{load_cloud, write_cloud, write_cloud_with};
use crate::peeling::{decide_interior, estimate_noise_radius, IndexConvention, NoiseRadiusParams};
use crate::sampling::{sample_ai_fgm, sample_mixture, sample_ring, FgmCopulaSpec, Marginal, MixtureModel, Seed};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "mi", version, about = "Decide whether a sampled manifold has empty interior")]
struct Cli {
    /// TOML file with [experiment], [schedule], [peeling] and [sampling] sections.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a sample and write it as CSV.
    Sample(SampleArgs),
    /// Distance to measure of query points.
    Dtm(DtmArgs),
    /// Remove points whose distance to measure exceeds the threshold.
    Denoise(DenoiseArgs),
    /// Union-of-balls peeling test.
    DecideInterior(DecideArgs),
    /// Radius of the tube around the manifold.
    EstimateRadius(RadiusArgs),
    /// Monte-Carlo table of correct-decision rates.
    Experiment(ExperimentArgs),
    /// Cross-module property checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Ring,
    Mixture,
    AiFgm,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: usize,
    /// Ring width.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Noise exponent: alpha_n = n^(-y).
    #[arg(long)]
    y: Option<f64>,
    /// Copula dependence parameter.
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DtmArgs {
    #[arg(long)]
    input: PathBuf,
    /// Mass fraction in (0, 1].
    #[arg(long)]
    m0: f64,
    /// Points to evaluate at; the input points when absent.
    #[arg(long)]
    query: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DenoiseArgs {
    #[arg(long)]
    input: PathBuf,
    /// Mass fraction, or `auto` for the schedule value at n.
    #[arg(long, default_value = "auto")]
    mn: String,
    /// Threshold, or `auto` for the schedule value at n.
    #[arg(long, default_value = "auto")]
    deltan: String,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    /// Defaults to `<input stem>.kept.csv` next to the input.
    #[arg(long)]
    kept: Option<PathBuf>,
    /// Defaults to `<input stem>.removed.csv` next to the input.
    #[arg(long)]
    removed: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MethodArgs {
    #[arg(long, value_enum)]
    method: Option<MethodName>,
    #[arg(long)]
    mc_samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    method: MethodArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    Literal,
    ExcludeSelf,
}

#[derive(Debug, Args)]
struct RadiusArgs {
    #[arg(long)]
    input: PathBuf,
    /// Lower bound of the sampling density.
    #[arg(long)]
    f0: f64,
    /// Radius constant; 1.05 times the smallest admissible value when absent.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_enum, default_value = "literal")]
    convention: Convention,
    #[command(flatten)]
    method: MethodArgs,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Results CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replicates per cell for every epsilon.
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<MethodName>,
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<f64>>,
    /// Sample sizes for every epsilon.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Fill the `seconds` column.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses `args` (including the program name) and runs the command; returns the exit status.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let line = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            1
        }
    }
}

fn emit(out: &mut impl Write, value: serde_json::Value) -> Result<()> {
    writeln!(out, "{value}")?;
    Ok(())
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout()),
    })
}

fn parse_auto(value: &str, auto: f64, flag: &str) -> Result<f64> {
    if value == "auto" {
        return Ok(auto);
    }
    value.parse().map_err(|_| Error::InvalidParameter(format!("--{flag} expects a number or `auto`, got `{value}`")))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<i32> {
    let mut cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Sample(a) => {
            let target = open_out(a.out.as_deref())?;
            let mut summary = json!({ "model": format!("{:?}", a.model).to_lowercase(), "n": a.n, "seed": a.seed });
            match a.model {
                Model::Ring => {
                    let ring = ring_for(a.epsilon)?;
                    write_cloud(target, &sample_ring(a.n, &ring, Seed::new(a.seed)))?;
                }
                Model::Mixture => {
                    let ring = ring_for(a.epsilon)?;
                    let schedule = a.y.map_or(cfg.schedule, |y| cfg.schedule.with_y(y));
                    schedule.validate()?;
                    let model = MixtureModel::new(ring, cfg.sampling.noise_box, schedule.alpha_n(a.n))?;
                    let sample = sample_mixture(a.n, &model, Seed::new(a.seed));
                    let labels: Vec<String> = sample.labels.iter().map(|l| l.as_str().to_string()).collect();
                    write_cloud_with(target, &sample.cloud, Some(("label", &labels)))?;
                    summary["alpha_n"] = json!(model.alpha_n);
                    summary["noise"] = json!(sample.noise_count());
                }
                Model::AiFgm => {
                    let spec = FgmCopulaSpec::new(a.n, a.eps, Marginal::Uniform { lo: 0.0, hi: 1.0 })?;
                    let draw = sample_ai_fgm(&spec, Seed::new(a.seed));
                    let cloud = crate::geometry::PointCloud::new(1, draw.values)?;
                    write_cloud(target, &cloud)?;
                    summary["alpha_n"] = json!(spec.alpha_n());
                    summary["proposals"] = json!(draw.proposals);
                }
            }
            if a.out.is_some() {
                emit(out, summary)?;
            }
        }
        Command::Dtm(a) => {
            let support = load_cloud(&a.input)?;
            let queries = match &a.query {
                Some(q) => load_cloud(q)?,
                None => support.clone(),
            };
            let params = DtmParams::new(a.m0)?;
            let measure = EmpiricalMeasure::new(support)?;
            for (i, v) in dtm_batch(&measure, &queries, &params)?.into_iter().enumerate() {
                emit(out, json!({ "index": i, "dtm": v }))?;
            }
        }
        Command::Denoise(a) => {
            let cloud = load_cloud(&a.input)?;
            let n = cloud.len();
            let mut s = cfg.schedule;
            s.x = a.x.unwrap_or(s.x);
            s.y = a.y.unwrap_or(s.y);
            s.z = a.z.unwrap_or(s.z);
            s.validate()?;
            let m_n = parse_auto(&a.mn, s.m_n(n), "mn")?;
            let delta_n = parse_auto(&a.deltan, s.delta_n(n), "deltan")?;
            let res = denoise(&cloud, m_n, delta_n)?;
            let kept_path = a.kept.unwrap_or_else(|| sibling(&a.input, "kept"));
            let removed_path = a.removed.unwrap_or_else(|| sibling(&a.input, "removed"));
            write_cloud(File::create(&kept_path)?, &cloud.select(&res.kept))?;
            write_cloud(File::create(&removed_path)?, &cloud.select(&res.removed))?;
            emit(
                out,
                json!({
                    "n": n,
                    "kept": res.kept.len(),
                    "removed": res.removed.len(),
                    "m_n": m_n,
                    "delta_n": delta_n,
                    "kept_path": kept_path,
                    "removed_path": removed_path,
                }),
            )?;
        }
        Command::DecideInterior(a) => {
            apply_method(&mut cfg, &a.method);
            let beta = a.beta.unwrap_or(cfg.peeling.beta);
            let cloud = load_cloud(&a.input)?;
            let method = cfg.boundary_method(Seed::new(a.method.seed));
            let d = decide_interior(&cloud, beta, &method)?;
            emit(
                out,
                json!({
                    "decision": if d.nonempty_interior { "nonempty" } else { "empty" },
                    "r_n": d.radius_used,
                    "peel_size": d.peel_size,
                    "n": d.n,
                    "beta": d.beta,
                    "method": method.name(),
                }),
            )?;
        }
        Command::EstimateRadius(a) => {
            apply_method(&mut cfg, &a.method);
            let cloud = load_cloud(&a.input)?;
            let d = cloud.dim();
            let c = a.c.unwrap_or_else(|| 1.05 * NoiseRadiusParams::min_c(a.f0, d));
            let params = NoiseRadiusParams::new(c, a.f0, cloud.len(), d)?;
            let convention = match a.convention {
                Convention::Literal => IndexConvention::Literal,
                Convention::ExcludeSelf => IndexConvention::ExcludeSelf,
            };
            let method = cfg.boundary_method(Seed::new(a.method.seed));
            let est = estimate_noise_radius(&cloud, &params, &method, convention)?;
            emit(
                out,
                json!({
                    "r_hat": est.r_hat,
                    "rho_n": est.rho_n,
                    "c": c,
                    "boundary_count": est.boundary_indices.len(),
                    "n": cloud.len(),
                }),
            )?;
        }
        Command::Experiment(a) => {
            let e = &mut cfg.experiment;
            if let Some(s) = a.seed {
                e.master_seed = s;
            }
            if let Some(r) = a.replicates {
                e.replicates_noiseless = r;
                e.replicates_noisy = r;
            }
            if a.threads.is_some() {
                e.threads = a.threads;
            }
            if let Some(v) = a.epsilon {
                e.epsilon_grid = v;
            }
            if let Some(v) = a.y {
                e.y_grid = v;
            }
            if let Some(v) = a.n {
                e.n_grid_noiseless = v.clone();
                e.n_grid_noisy = v;
            }
            if let Some(b) = a.beta {
                cfg.peeling.beta = b;
            }
            if let Some(m) = a.method {
                cfg.peeling.method = m;
            }
            let csv_target = open_out(a.out.as_deref())?;
            let report = run_table_with(&cfg, Some(csv_target), TableOptions { timing: a.timing }, |r| {
                if r.errors > 0 || r.partial {
                    eprintln!("{}", json!({ "warning": "cell", "cell": r.cell(), "errors": r.errors, "partial": r.partial }));
                }
            })?;
            let summary = serde_json::to_value(&report.summary).expect("summary serialises");
            if a.out.is_some() {
                emit(out, summary)?;
            } else {
                eprintln!("{summary}");
            }
        }
        Command::Verify(a) => {
            let report = run_property_suite(a.seed)?;
            for c in &report.checks {
                emit(out, serde_json::to_value(c).expect("check serialises"))?;
            }
            let pass = report.all_pass();
            emit(out, json!({ "seed": a.seed, "pass": pass, "checks": report.checks.len() }))?;
            return Ok(if pass { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn apply_method(cfg: &mut ExperimentConfig, m: &MethodArgs) {
    if let Some(method) = m.method {
        cfg.peeling.method = method;
    }
    if let Some(s) = m.mc_samples {
        cfg.peeling.mc_samples = s;
    }
}

fn ring_for(epsilon: f64) -> Result<RingSpec> {
    if !(0.0..2.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in [0, 2), got {epsilon}")));
    }
    Ok(RingSpec::centered(epsilon))
}

fn sibling(input: &Path, tag: &str) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("cloud");
    input.with_file_name(format!("{stem}.{tag}.csv"))
}
