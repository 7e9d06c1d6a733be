use thiserror::Error;

use crate::alignment::AlignError;
use crate::comparison::ComparisonError;
use crate::dataset::{LoadError, ParseError};
use crate::metrics::MetricsError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Any failure raised by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error("no data for {0}")]
    NoMatchingData(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
