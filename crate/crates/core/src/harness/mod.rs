//! Monte-Carlo reproduction of the ring experiment and the cross-module
//! property checks.

mod config;
mod experiment;
mod properties;
pub mod tables;

pub use config::{Cell, ExperimentConfig, ExperimentSection, MethodName, PeelingSection, SamplingSection};
pub use experiment::{
    cell_key, comparison_tolerance, run_cell, run_replicate, run_table, run_table_with, summarize, CellResult,
    FlaggedCell, ReplicateOutcome, TableOptions, TableReport, TableSummary, CSV_COLUMNS,
};
pub use properties::{
    ai_bound_property, dtm_stability_check, hausdorff_rate_check, maxmin_lower_bound_check, mixture_bound_check,
    noise_radius_check, run_property_suite, PropertyCheck, PropertyReport,
};
