use std::f64::consts::TAU;

/// Endpoints closer than this (radians) are merged.
pub const ARC_MERGE_TOL: f64 = 1e-12;

/// Union of half-open angular intervals on `[0, 2pi)`, kept sorted and merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArcSet {
    intervals: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the union of arcs given as (center angle, half-width).
    pub fn from_arcs(arcs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut raw = Vec::new();
        for (center, half) in arcs {
            push_arc(&mut raw, center, half);
        }
        ArcSet { intervals: merge(raw) }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// True iff the merged intervals leave no gap on the circle.
    pub fn covers_full_circle(&self) -> bool {
        matches!(self.intervals.as_slice(), [(a, b)] if *a <= ARC_MERGE_TOL && *b >= TAU - ARC_MERGE_TOL)
    }
}

fn push_arc(raw: &mut Vec<(f64, f64)>, center: f64, half: f64) {
    if half <= 0.0 {
        return;
    }
    if half >= TAU / 2.0 {
        raw.push((0.0, TAU));
        return;
    }
    let start = (center - half).rem_euclid(TAU);
    let end = start + 2.0 * half;
    if end <= TAU {
        raw.push((start, end));
    } else {
        raw.push((start, TAU));
        raw.push((0.0, end - TAU));
    }
}

fn merge(mut raw: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    for (a, b) in raw {
        match out.last_mut() {
            Some(last) if a <= last.1 + ARC_MERGE_TOL => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}
