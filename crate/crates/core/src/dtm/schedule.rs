use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Polynomial schedules `m_n = a n^-x`, `alpha_n = b n^-y`, `delta_n = c n^-z`
/// for a `d_prime`-dimensional manifold in R^d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScheduleExponents {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub d: usize,
    pub d_prime: usize,
    pub m_scale: f64,
    pub alpha_scale: f64,
    pub delta_scale: f64,
}

impl Default for ScheduleExponents {
    fn default() -> Self {
        ScheduleExponents {
            x: 0.25,
            y: 0.95,
            z: 0.95,
            d: 2,
            d_prime: 1,
            m_scale: 1.0,
            alpha_scale: 1.0,
            delta_scale: 1000.0,
        }
    }
}

impl ScheduleExponents {
    pub fn validate(&self) -> Result<()> {
        if !(self.x > 0.0 && self.y > 0.0 && self.z > 0.0) {
            return Err(Error::InvalidParameter("schedule exponents must be positive".into()));
        }
        if !(self.d >= self.d_prime && self.d_prime >= 1) {
            return Err(Error::InvalidParameter(format!(
                "need d >= d' >= 1, got d = {}, d' = {}",
                self.d, self.d_prime
            )));
        }
        if !(self.m_scale > 0.0 && self.alpha_scale >= 0.0 && self.delta_scale >= 0.0) {
            return Err(Error::InvalidParameter("schedule scales must be nonnegative (m_scale positive)".into()));
        }
        Ok(())
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = y;
        self
    }

    /// Mass fraction for the distance to measure, capped at 1.
    pub fn m_n(&self, n: usize) -> f64 {
        (self.m_scale * (n as f64).powf(-self.x)).min(1.0)
    }

    /// Noise proportion, capped at 1.
    pub fn alpha_n(&self, n: usize) -> f64 {
        (self.alpha_scale * (n as f64).powf(-self.y)).min(1.0)
    }

    /// Denoising threshold.
    pub fn delta_n(&self, n: usize) -> f64 {
        self.delta_scale * (n as f64).powf(-self.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub label: &'static str,
    /// Left-hand side; the condition asks for it to be negative.
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleReport {
    pub conditions: Vec<ConditionCheck>,
    /// `d == d'`: every condition collapses to `1 - y < 0`.
    pub degenerate: bool,
    /// The convergence result behind the conditions assumes `d >= 4`.
    pub dimension_hypothesis_met: bool,
    pub pass: bool,
}

/// Evaluates the four exponent conditions under which the noise points are
/// eventually all removed.
pub fn validate_schedule(s: &ScheduleExponents) -> ScheduleReport {
    let (x, y, z) = (s.x, s.y, s.z);
    let d = s.d as f64;
    let gap = (s.d - s.d_prime) as f64;
    let values = [
        ("1-y-x(d-d')/d'", 1.0 - y - x * gap / s.d_prime as f64),
        ("1-y+(x-y)(d-d')/2", 1.0 - y + (x - y) / 2.0 * gap),
        ("1-y+(x/2-1/d)(d-d')", 1.0 - y + (x / 2.0 - 1.0 / d) * gap),
        ("1-y-z(d-d')", 1.0 - y - z * gap),
    ];
    let conditions: Vec<ConditionCheck> = values
        .into_iter()
        .map(|(label, value)| ConditionCheck { label, value, pass: value < 0.0 })
        .collect();
    let pass = conditions.iter().all(|c| c.pass);
    ScheduleReport {
        conditions,
        degenerate: s.d == s.d_prime,
        dimension_hypothesis_met: s.d >= 4,
        pass,
    }
}
