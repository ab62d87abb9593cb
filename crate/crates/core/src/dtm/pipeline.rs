use serde::Serialize;

use super::{denoise, ScheduleExponents};
use crate::geometry::PointCloud;
use crate::peeling::{decide_interior, BoundaryMethod, InteriorDecision};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum PipelineDecision {
    Decided(InteriorDecision),
    /// Fewer than two points survived denoising.
    InsufficientPoints { kept: usize },
}

impl PipelineDecision {
    pub fn nonempty_interior(&self) -> Option<bool> {
        match self {
            PipelineDecision::Decided(d) => Some(d.nonempty_interior),
            PipelineDecision::InsufficientPoints { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOutcome {
    pub decision: PipelineDecision,
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
    pub m_n: f64,
    pub delta_n: f64,
}

/// Denoise with `m_n`, `delta_n` taken from the schedule at `n = |cloud|`, then
/// run the interior decision on the kept points.
pub fn denoise_and_decide(
    cloud: &PointCloud,
    schedule: &ScheduleExponents,
    beta: f64,
    method: &BoundaryMethod,
) -> Result<PipelineOutcome> {
    schedule.validate()?;
    let n = cloud.len();
    denoise_and_decide_with(cloud, schedule.m_n(n), schedule.delta_n(n), beta, method)
}

/// Same as [`denoise_and_decide`] with explicit `m_n` and `delta_n`.
pub fn denoise_and_decide_with(
    cloud: &PointCloud,
    m_n: f64,
    delta_n: f64,
    beta: f64,
    method: &BoundaryMethod,
) -> Result<PipelineOutcome> {
    if cloud.len() < 2 {
        return Err(Error::DegenerateSample(cloud.len()));
    }
    // DTM is evaluated once, against the full sample, before anything is removed.
    let filtered = denoise(cloud, m_n, delta_n)?;
    let decision = if filtered.kept.len() < 2 {
        PipelineDecision::InsufficientPoints { kept: filtered.kept.len() }
    } else {
        PipelineDecision::Decided(decide_interior(&cloud.select(&filtered.kept), beta, method)?)
    };
    Ok(PipelineOutcome { decision, kept: filtered.kept, removed: filtered.removed, m_n, delta_n })
}
