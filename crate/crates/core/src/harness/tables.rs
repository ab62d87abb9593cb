//! Reference correct-decision rates for the annulus experiment.
//!
//! Rows are indexed by the noise exponent `y`, columns by the sample size `n`.

pub const Y_GRID: [f64; 4] = [0.75, 0.8, 0.9, 0.95];
pub const N_GRID_NOISELESS: [usize; 5] = [250, 500, 1000, 2500, 5000];
pub const N_GRID_NOISY: [usize; 5] = [5, 10, 25, 50, 100];
pub const EPSILON_GRID: [f64; 4] = [0.0, 0.01, 0.05, 0.1];

const EPS_0: [[f64; 5]; 4] = [
    [0.05, 0.02, 0.03, 0.28, 0.86],
    [0.05, 0.07, 0.05, 0.34, 0.94],
    [0.30, 0.18, 0.24, 0.63, 0.95],
    [0.47, 0.34, 0.36, 0.75, 0.99],
];

const EPS_001: [[f64; 5]; 4] = [
    [0.046, 0.510, 0.936, 0.983, 0.999],
    [0.040, 0.475, 0.923, 0.961, 0.997],
    [0.029, 0.416, 0.850, 0.922, 0.998],
    [0.034, 0.377, 0.851, 0.899, 0.997],
];

const EPS_005: [[f64; 5]; 4] = [
    [0.047, 0.583, 0.990, 0.999, 1.0],
    [0.038, 0.552, 0.977, 0.999, 1.0],
    [0.040, 0.509, 0.966, 0.999, 1.0],
    [0.036, 0.470, 0.970, 0.997, 1.0],
];

const EPS_01: [[f64; 5]; 4] = [
    [0.049, 0.643, 0.997, 1.0, 1.0],
    [0.043, 0.624, 0.990, 1.0, 1.0],
    [0.037, 0.581, 0.988, 1.0, 1.0],
    [0.036, 0.535, 0.993, 1.0, 1.0],
];

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

/// Published rate for the cell `(epsilon, n, y)`, if the cell is in the tables.
pub fn paper_value(epsilon: f64, n: usize, y: f64) -> Option<f64> {
    let (table, columns) = if same(epsilon, 0.0) {
        (&EPS_0, &N_GRID_NOISELESS)
    } else if same(epsilon, 0.01) {
        (&EPS_001, &N_GRID_NOISY)
    } else if same(epsilon, 0.05) {
        (&EPS_005, &N_GRID_NOISY)
    } else if same(epsilon, 0.1) {
        (&EPS_01, &N_GRID_NOISY)
    } else {
        return None;
    };
    let row = Y_GRID.iter().position(|&v| same(v, y))?;
    let col = columns.iter().position(|&v| v == n)?;
    Some(table[row][col])
}
