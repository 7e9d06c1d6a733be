//! Performance analysis of iterative optimization heuristics.
//!
//! The crate ingests benchmark trace archives (IOHprofiler and two-column
//! layouts), aligns runs into fixed-target hitting-time or fixed-budget
//! best-value matrices, and computes the descriptive and distributional
//! statistics used to compare optimizers: success rates, PAR-c, ERT,
//! quantiles, ECDFs and their aggregations, histograms, kernel density
//! estimates, Kolmogorov-Smirnov testing and Glicko-2 rankings.
//!
//! Numerical routines are generic over [`Scalar`]; the aliases at the crate
//! root fix the scalar to `f64`, which is what the loaders produce.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alignment;
pub mod comparison;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod scalar;

pub use alignment::{
    align_fixed_budget, align_fixed_target, align_parameter, generate_sequence, AlignedMatrix, AnchorSequence,
    Perspective, Scale, ScaleChoice, Spacing,
};
pub use comparison::{
    glicko2_game_update, glicko2_rank, ks_two_sample, pairwise_ks, Decision, Preference, RankProblem, Score,
};
pub use dataset::{
    detect_direction, load_archive_bytes, load_experiment, parse_info, parse_raw, DataSet, DataSetCollection,
    Direction, InstanceRecord, MetaEntry, Record, TraceRun,
};
pub use error::{Error, Result};
pub use scalar::{Proportion, Scalar};

/// Descriptive statistics per anchor, in `f64`.
pub type StatRow = metrics::StatRow<f64>;
/// Sample moments and quantiles, in `f64`.
pub type SampleSummary = metrics::SampleSummary<f64>;
/// ECDF over an `f64` grid with `f64` proportions.
pub type EcdfCurve = metrics::EcdfCurve<f64, f64>;
/// Kernel density estimate in `f64`.
pub type DensityEstimate = metrics::DensityEstimate<f64>;
/// Histogram binning in `f64`.
pub type Bins = metrics::Bins<f64>;
/// Glicko-2 player state in `f64`.
pub type GlickoState = comparison::GlickoState<f64>;
/// Two-sample KS outcome in `f64`.
pub type KsResult = comparison::KsResult<f64>;
/// Pairwise KS matrix and partial order in `f64`.
pub type PairwiseKs = comparison::PairwiseKs<f64>;
