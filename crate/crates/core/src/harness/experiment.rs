use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Cell, ExperimentConfig};
use super::tables::paper_value;
use crate::dtm::{denoise_and_decide, PipelineDecision};
use crate::geometry::RingSpec;
use crate::sampling::{mix64, sample_mixture, MixtureModel, Purpose};
use crate::{Error, Result};

/// Column order of the results CSV.
pub const CSV_COLUMNS: [&str; 9] =
    ["epsilon", "n", "y", "correct_rate", "paper_value", "abs_diff", "mean_kept", "replicates", "seconds"];

/// Stable 64-bit key of a cell, used to derive its replicate seeds.
pub fn cell_key(cell: &Cell) -> u64 {
    mix64(mix64(cell.epsilon.to_bits(), cell.n as u64), cell.y.to_bits())
}

/// Allowed `|rate - reference|` for a cell with `replicates` draws: three binomial
/// standard errors at p = 1/2 plus 0.02.
pub fn comparison_tolerance(replicates: usize) -> f64 {
    3.0 * (0.25 / replicates as f64).sqrt() + 0.02
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ReplicateOutcome {
    Decided { correct: bool, kept: usize },
    Insufficient { kept: usize },
    Failed { error: String },
}

impl ReplicateOutcome {
    pub fn is_correct(&self) -> bool {
        matches!(self, ReplicateOutcome::Decided { correct: true, .. })
    }

    fn kept(&self) -> Option<usize> {
        match self {
            ReplicateOutcome::Decided { kept, .. } | ReplicateOutcome::Insufficient { kept } => Some(*kept),
            ReplicateOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub epsilon: f64,
    pub n: usize,
    pub y: f64,
    pub correct_rate: f64,
    /// Replicates actually run.
    pub replicates: usize,
    pub requested_replicates: usize,
    pub mean_kept: f64,
    pub paper_value: Option<f64>,
    pub abs_diff: Option<f64>,
    /// Replicates where fewer than two points survived denoising.
    pub insufficient: usize,
    /// Replicates that failed with an error; scored incorrect.
    pub errors: usize,
    pub first_error: Option<String>,
    /// The time cap stopped the cell before every replicate ran.
    pub partial: bool,
    pub seconds: f64,
}

impl CellResult {
    pub fn cell(&self) -> Cell {
        Cell { epsilon: self.epsilon, n: self.n, y: self.y }
    }

    pub fn exceeds_tolerance(&self) -> bool {
        self.abs_diff.is_some_and(|d| d > comparison_tolerance(self.replicates.max(1)))
    }
}

/// Run one replicate of a cell: sample, denoise, decide, score.
pub fn run_replicate(cfg: &ExperimentConfig, cell: &Cell, replicate: u64) -> ReplicateOutcome {
    match try_replicate(cfg, cell, replicate) {
        Ok(outcome) => outcome,
        Err(e) => ReplicateOutcome::Failed { error: e.to_string() },
    }
}

fn try_replicate(cfg: &ExperimentConfig, cell: &Cell, replicate: u64) -> Result<ReplicateOutcome> {
    let key = cell_key(cell);
    let master = cfg.master_seed();
    let schedule = cfg.schedule.with_y(cell.y);
    let model = MixtureModel::new(RingSpec::centered(cell.epsilon), cfg.sampling.noise_box, schedule.alpha_n(cell.n))?;
    let sample = sample_mixture(cell.n, &model, master.derive(key, replicate, Purpose::Sample));
    let method = cfg.boundary_method(master.derive(key, replicate, Purpose::Boundary));
    let outcome = denoise_and_decide(&sample.cloud, &schedule, cfg.peeling.beta, &method)?;
    let kept = outcome.kept.len();
    Ok(match outcome.decision {
        PipelineDecision::Decided(d) => ReplicateOutcome::Decided { correct: d.nonempty_interior == (cell.epsilon > 0.0), kept },
        PipelineDecision::InsufficientPoints { kept } => ReplicateOutcome::Insufficient { kept },
    })
}

fn build_pool(cfg: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.effective_threads() {
        builder = builder.num_threads(t);
    }
    builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Run every replicate of `cell` and aggregate in replicate order.
pub fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> Result<CellResult> {
    cfg.validate()?;
    let pool = build_pool(cfg)?;
    Ok(run_cell_in(&pool, cfg, cell))
}

fn run_cell_in(pool: &rayon::ThreadPool, cfg: &ExperimentConfig, cell: &Cell) -> CellResult {
    let requested = cfg.replicates_for(cell.epsilon);
    let cap = Duration::from_secs_f64(cfg.experiment.cell_time_cap_secs);
    let start = Instant::now();
    let expired = AtomicBool::new(false);
    let outcomes: Vec<Option<ReplicateOutcome>> = pool.install(|| {
        (0..requested as u64)
            .into_par_iter()
            .map(|r| {
                if expired.load(Ordering::Relaxed) || start.elapsed() > cap {
                    expired.store(true, Ordering::Relaxed);
                    return None;
                }
                Some(run_replicate(cfg, cell, r))
            })
            .collect()
    });
    let seconds = start.elapsed().as_secs_f64();

    let done: Vec<&ReplicateOutcome> = outcomes.iter().flatten().collect();
    let replicates = done.len();
    let correct = done.iter().filter(|o| o.is_correct()).count();
    let insufficient = done.iter().filter(|o| matches!(o, ReplicateOutcome::Insufficient { .. })).count();
    let failures: Vec<&String> = done
        .iter()
        .filter_map(|o| match o {
            ReplicateOutcome::Failed { error } => Some(error),
            _ => None,
        })
        .collect();
    let kept: Vec<usize> = done.iter().filter_map(|o| o.kept()).collect();
    let mean_kept = if kept.is_empty() { 0.0 } else { kept.iter().sum::<usize>() as f64 / kept.len() as f64 };
    let correct_rate = if replicates == 0 { 0.0 } else { correct as f64 / replicates as f64 };
    let paper = paper_value(cell.epsilon, cell.n, cell.y);
    CellResult {
        epsilon: cell.epsilon,
        n: cell.n,
        y: cell.y,
        correct_rate,
        replicates,
        requested_replicates: requested,
        mean_kept,
        paper_value: paper,
        abs_diff: paper.map(|p| (correct_rate - p).abs()),
        insufficient,
        errors: failures.len(),
        first_error: failures.first().map(|s| s.to_string()),
        partial: replicates < requested,
        seconds,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlaggedCell {
    pub epsilon: f64,
    pub n: usize,
    pub y: f64,
    pub correct_rate: f64,
    pub paper_value: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableSummary {
    pub cells: usize,
    pub beta: f64,
    pub method: String,
    /// Cells whose rate is further from the reference value than the tolerance.
    pub flagged: Vec<FlaggedCell>,
    pub partial_cells: usize,
    pub replicate_errors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub results: Vec<CellResult>,
    pub summary: TableSummary,
}

#[derive(Serialize)]
struct CsvRow {
    epsilon: f64,
    n: usize,
    y: f64,
    correct_rate: f64,
    paper_value: Option<f64>,
    abs_diff: Option<f64>,
    mean_kept: f64,
    replicates: usize,
    seconds: Option<String>,
}

/// Options for [`run_table_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TableOptions {
    /// Fill the `seconds` column. Off by default so output bytes depend only on
    /// the configuration.
    pub timing: bool,
}

/// Run the whole grid and collect results without writing anything.
pub fn run_table(cfg: &ExperimentConfig) -> Result<TableReport> {
    run_table_with(cfg, None::<&mut Vec<u8>>, TableOptions::default(), |_| {})
}

/// Run the whole grid. When `out` is given, each row is written and flushed as
/// soon as its cell finishes; `on_cell` sees every result in grid order.
pub fn run_table_with<W: Write>(
    cfg: &ExperimentConfig,
    out: Option<W>,
    opts: TableOptions,
    mut on_cell: impl FnMut(&CellResult),
) -> Result<TableReport> {
    cfg.validate()?;
    let pool = build_pool(cfg)?;
    let mut writer = out.map(|w| csv::WriterBuilder::new().has_headers(false).from_writer(w));
    if let Some(w) = writer.as_mut() {
        w.write_record(CSV_COLUMNS)?;
        w.flush()?;
    }
    let mut results = Vec::new();
    for cell in cfg.cells() {
        let res = run_cell_in(&pool, cfg, &cell);
        if let Some(w) = writer.as_mut() {
            w.serialize(CsvRow {
                epsilon: res.epsilon,
                n: res.n,
                y: res.y,
                correct_rate: res.correct_rate,
                paper_value: res.paper_value,
                abs_diff: res.abs_diff,
                mean_kept: res.mean_kept,
                replicates: res.replicates,
                seconds: opts.timing.then(|| format!("{:.3}", res.seconds)),
            })?;
            w.flush()?;
        }
        on_cell(&res);
        results.push(res);
    }
    let summary = summarize(cfg, &results);
    Ok(TableReport { results, summary })
}

pub fn summarize(cfg: &ExperimentConfig, results: &[CellResult]) -> TableSummary {
    let flagged = results
        .iter()
        .filter(|r| r.exceeds_tolerance())
        .map(|r| FlaggedCell {
            epsilon: r.epsilon,
            n: r.n,
            y: r.y,
            correct_rate: r.correct_rate,
            paper_value: r.paper_value.unwrap_or(f64::NAN),
            abs_diff: r.abs_diff.unwrap_or(f64::NAN),
            tolerance: comparison_tolerance(r.replicates.max(1)),
        })
        .collect();
    TableSummary {
        cells: results.len(),
        beta: cfg.peeling.beta,
        method: cfg.boundary_method(crate::sampling::Seed::new(0)).name().to_string(),
        flagged,
        partial_cells: results.iter().filter(|r| r.partial).count(),
        replicate_errors: results.iter().map(|r| r.errors).sum(),
    }
}
