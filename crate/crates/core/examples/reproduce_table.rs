//! Run a reduced slice of the ring experiment and stream the CSV to stdout.
//!
//! The full grid is `mi experiment --out results.csv`.

use manifold_interior::harness::{run_table_with, ExperimentConfig, TableOptions};

fn main() -> manifold_interior::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.experiment.epsilon_grid = vec![0.0, 0.05];
    cfg.experiment.n_grid_noiseless = vec![250, 500];
    cfg.experiment.n_grid_noisy = vec![25, 50];
    cfg.experiment.replicates_noiseless = 50;
    cfg.experiment.replicates_noisy = 200;
    let report = run_table_with(&cfg, Some(std::io::stdout().lock()), TableOptions { timing: true }, |cell| {
        eprintln!("done: eps={} n={} y={} rate={:.3}", cell.epsilon, cell.n, cell.y, cell.correct_rate);
    })?;
    eprintln!("{} cells, {} beyond tolerance", report.summary.cells, report.summary.flagged.len());
    Ok(())
}
