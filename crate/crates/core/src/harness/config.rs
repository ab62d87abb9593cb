use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tables::{EPSILON_GRID, N_GRID_NOISELESS, N_GRID_NOISY, Y_GRID};
use crate::dtm::ScheduleExponents;
use crate::peeling::{beta_threshold, BoundaryMethod};
use crate::sampling::{NoiseBox, Seed};
use crate::{Error, Result};

/// Boundary-ball method as named in config files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Exact2d,
    Mc,
}

/// Grid, replicate counts and seeding of the simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub master_seed: u64,
    pub epsilon_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    /// Sample sizes for `epsilon = 0`.
    pub n_grid_noiseless: Vec<usize>,
    /// Sample sizes for `epsilon > 0`.
    pub n_grid_noisy: Vec<usize>,
    pub replicates_noiseless: usize,
    pub replicates_noisy: usize,
    /// Wall-clock cap per cell; replicates not started before it are skipped.
    pub cell_time_cap_secs: f64,
    /// Worker threads; `MI_THREADS` caps this further.
    pub threads: Option<usize>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            master_seed: 20_240_417,
            epsilon_grid: EPSILON_GRID.to_vec(),
            y_grid: Y_GRID.to_vec(),
            n_grid_noiseless: N_GRID_NOISELESS.to_vec(),
            n_grid_noisy: N_GRID_NOISY.to_vec(),
            replicates_noiseless: 100,
            replicates_noisy: 1000,
            cell_time_cap_secs: 600.0,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeelingSection {
    pub beta: f64,
    pub method: MethodName,
    pub mc_samples: usize,
}

impl Default for PeelingSection {
    fn default() -> Self {
        PeelingSection { beta: 2.5, method: MethodName::Exact2d, mc_samples: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[derive(Default)]
pub struct SamplingSection {
    pub noise_box: NoiseBox,
}


/// Everything needed to reproduce a table run.
///
/// Stored as TOML with one section per module:
///
/// ```toml
/// [experiment]
/// master_seed = 7
/// epsilon_grid = [0.05]
/// n_grid_noisy = [50, 100]
///
/// [schedule]
/// x = 0.25
/// delta_scale = 1000.0
///
/// [peeling]
/// beta = 2.5
/// method = "exact2d"
/// ```
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    /// The `y` field here is ignored; each cell sets its own.
    pub schedule: ScheduleExponents,
    pub peeling: PeelingSection,
    pub sampling: SamplingSection,
}

/// One `(epsilon, n, y)` cell of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub epsilon: f64,
    pub n: usize,
    pub y: f64,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        let e = &self.experiment;
        if e.replicates_noiseless == 0 || e.replicates_noisy == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if e.epsilon_grid.iter().any(|&x| !(0.0..2.0).contains(&x)) {
            return Err(Error::Config("epsilon values must lie in [0, 2)".into()));
        }
        if e.n_grid_noiseless.iter().chain(&e.n_grid_noisy).any(|&n| n < 2) {
            return Err(Error::Config("sample sizes must be at least 2".into()));
        }
        if !(e.cell_time_cap_secs > 0.0) {
            return Err(Error::Config("cell_time_cap_secs must be positive".into()));
        }
        if e.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        self.schedule.validate()?;
        let threshold = beta_threshold(2);
        if !(self.peeling.beta > threshold) {
            return Err(Error::BetaBelowThreshold { beta: self.peeling.beta, threshold });
        }
        if self.peeling.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be at least 1".into()));
        }
        for eps in &e.epsilon_grid {
            let ring = crate::geometry::RingSpec::centered(*eps);
            crate::sampling::MixtureModel::new(ring, self.sampling.noise_box, 0.0)?;
        }
        Ok(())
    }

    pub fn master_seed(&self) -> Seed {
        Seed::new(self.experiment.master_seed)
    }

    pub fn replicates_for(&self, epsilon: f64) -> usize {
        if epsilon == 0.0 {
            self.experiment.replicates_noiseless
        } else {
            self.experiment.replicates_noisy
        }
    }

    /// Cells in output order: epsilon, then y, then n.
    pub fn cells(&self) -> Vec<Cell> {
        let e = &self.experiment;
        let mut out = Vec::new();
        for &epsilon in &e.epsilon_grid {
            let ns = if epsilon == 0.0 { &e.n_grid_noiseless } else { &e.n_grid_noisy };
            for &y in &e.y_grid {
                for &n in ns {
                    out.push(Cell { epsilon, n, y });
                }
            }
        }
        out
    }

    /// Boundary method for one replicate; Monte-Carlo streams are derived per replicate.
    pub fn boundary_method(&self, mc_seed: Seed) -> BoundaryMethod {
        match self.peeling.method {
            MethodName::Exact2d => BoundaryMethod::Exact2d,
            MethodName::Mc => BoundaryMethod::MonteCarlo { samples: self.peeling.mc_samples, seed: mc_seed.value() },
        }
    }

    /// Thread count after applying the `MI_THREADS` cap.
    pub fn effective_threads(&self) -> Option<usize> {
        let env = std::env::var("MI_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&v| v > 0);
        match (self.experiment.threads, env) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}
