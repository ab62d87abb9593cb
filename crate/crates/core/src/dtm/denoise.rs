use serde::Serialize;

use super::{dtm_batch, DtmParams, EmpiricalMeasure};
use crate::geometry::PointCloud;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenoiseResult {
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
    /// DTM value of every input point against the full-sample measure.
    pub dtm_values: Vec<f64>,
}

impl DenoiseResult {
    /// Set when nothing survived; the caller decides what to do.
    pub fn all_removed(&self) -> bool {
        self.kept.is_empty()
    }
}

/// Drops the points whose DTM (w.r.t. the empirical measure of the whole cloud,
/// mass `m_n`) exceeds `delta_n`.
pub fn denoise(cloud: &PointCloud, m_n: f64, delta_n: f64) -> Result<DenoiseResult> {
    if !(delta_n >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta_n must be nonnegative, got {delta_n}")));
    }
    let params = DtmParams::new(m_n)?;
    let mu = EmpiricalMeasure::new(cloud.clone())?;
    let dtm_values = dtm_batch(&mu, cloud, &params)?;
    let (kept, removed) = (0..cloud.len()).partition(|&i| dtm_values[i] <= delta_n);
    Ok(DenoiseResult { kept, removed, dtm_values })
}
