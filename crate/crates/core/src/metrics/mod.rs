//! Descriptive and distributional statistics over aligned runs.

mod density;
mod ecdf;
mod overview;
mod quantile;
mod radar;
mod runtime;
mod summary;

use thiserror::Error;

pub use density::{fd_bins, histogram, kde, kde_auto, silverman_bandwidth, BinRule, Bins, DensityEstimate};
pub use ecdf::{default_grid, ecdf_auc, ecdf_functions, ecdf_single, ecdf_targets, EcdfCurve, EcdfMeta, EcdfScope};
pub use overview::{data_overview, OverviewRow};
pub use quantile::{quantile, quantile_sorted, QUANTILE_LEVELS};
pub use radar::radar_targets;
pub use runtime::{ert, par_c, success_rate};
pub use summary::{describe, summarize, SampleSummary, StatRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("empty sample")]
    EmptySample,
    #[error("penalty factor must be at least 1, got {0}")]
    InvalidPenalty(f64),
    #[error("{what}: expected {expected} entries, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("integration range must satisfy 1 <= min < max, got [{min}, {max}]")]
    DegenerateRange { min: f64, max: f64 },
    #[error("need at least 2 finite values, got {0}")]
    TooFewPoints(usize),
    #[error("evaluation grid must be sorted and free of NaN")]
    UnsortedGrid,
    #[error("operation needs a fixed-target matrix")]
    NotFixedTarget,
    #[error("matrices belong to different algorithms or perspectives")]
    IncompatibleMatrices,
    #[error("no data for {0}")]
    NoMatchingData(String),
}
