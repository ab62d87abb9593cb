use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate sample: need at least 2 points, got {0}")]
    DegenerateSample(usize),

    #[error("empty point cloud")]
    EmptyCloud,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("k = {k} out of range for a cloud of {n} points")]
    KOutOfRange { k: usize, n: usize },

    #[error("ring reference is 2-D only (got dimension {0})")]
    RingIs2dOnly(usize),

    #[error("exact boundary classification requires dimension 2 (got {0}); use boundary_balls_mc")]
    ExactRequires2d(usize),

    #[error("classification has {found} flags but the union has {expected} balls")]
    ClassificationMismatch { expected: usize, found: usize },

    #[error("beta below theorem threshold: beta = {beta} must exceed 6^(1/d) = {threshold}")]
    BetaBelowThreshold { beta: f64, threshold: f64 },

    #[error("no boundary balls; radius too large")]
    NoBoundaryBalls,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("problem has {pairs} atom pairs, above the exact-solver cap of {cap}; subsample the measures")]
    SizeCapExceeded { pairs: usize, cap: usize },

    #[error("transport plans do not share the same source measure")]
    MismatchedSources,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    /// Stable short tag used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateSample(_) => "degenerate_sample",
            Error::EmptyCloud => "empty_cloud",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidPoint(_) => "invalid_point",
            Error::KOutOfRange { .. } => "k_out_of_range",
            Error::RingIs2dOnly(_) => "ring_2d_only",
            Error::ExactRequires2d(_) => "exact_requires_2d",
            Error::ClassificationMismatch { .. } => "classification_mismatch",
            Error::BetaBelowThreshold { .. } => "beta_below_threshold",
            Error::NoBoundaryBalls => "no_boundary_balls",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::SizeCapExceeded { .. } => "size_cap_exceeded",
            Error::MismatchedSources => "mismatched_sources",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Config(_) => "config",
        }
    }
}
