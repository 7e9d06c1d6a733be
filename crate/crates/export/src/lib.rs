//! Tables and plot data for benchmark analyses, rendered as CSV, LaTeX or
//! JSON.

pub mod json;
mod number;
pub mod report;
mod table;
mod tables;

use thiserror::Error;

pub use number::format_number;
pub use table::{latex_escape, Cell, Format, TableDocument};
pub use tables::{
    auc_table, ecdf_table, export_samples, ks_table, overview_table, parameter_table, rank_table, samples_table,
    stats_table, summary_table, Layout,
};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("row {row} has {actual} cells, header has {expected}")]
    NotRectangular { row: usize, expected: usize, actual: usize },
    #[error("unknown output format `{0}`")]
    UnknownFormat(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
