//! In-memory model of benchmark traces and the parsers that produce it.

mod archive;
mod direction;
mod info;
mod load;
mod raw;
mod write;

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use direction::{detect_direction, MixedMonotonicity};
pub use info::parse_info;
pub use load::{load_archive_bytes, load_experiment};
pub use raw::{parse_raw, BEST_SO_FAR, CURRENT_VALUE, FUNCTION_EVALUATION};
pub use write::{write_experiment, write_info_block, write_raw};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("empty meta-data file")]
    EmptyFile,
    #[error("mandatory key `{0}` missing from meta-data header")]
    MissingMandatoryKey(String),
    #[error("invalid value `{value}` for key `{key}`")]
    InvalidValue { key: String, value: String },
    #[error("meta-data block for funcId {func_id}, DIM {dimension} has no data line")]
    MissingDataLine { func_id: u32, dimension: u32 },
    #[error("malformed instance token `{0}`")]
    MalformedInstanceToken(String),
    #[error("no separator line starting with \"function evaluation\"")]
    NoSeparatorLine,
    #[error("separator line lacks the mandatory column {0:?}")]
    MissingMandatoryColumn(String),
    #[error("non-numeric mandatory field on line {line}: `{text}`")]
    NonNumericMandatoryField { line: usize, text: String },
    #[error("evaluation count out of range on line {line}: `{text}`")]
    EvaluationOutOfRange { line: usize, text: String },
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("raw data file {0} referenced by meta-data does not exist")]
    MissingRawFile(PathBuf),
    #[error("no meta-data (.info) files found")]
    EmptyArchive,
    #[error("unsupported or corrupt archive: {0}")]
    UnsupportedArchive(String),
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: runs are neither all maximizing nor all minimizing")]
    MixedMonotonicity { path: PathBuf },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Optimization direction of a data set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// `a` is at least as good as `b`.
    #[inline]
    pub fn reaches(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Maximize => a >= b,
            Direction::Minimize => a <= b,
        }
    }

    /// `a` is strictly better than `b`.
    #[inline]
    pub fn improves(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }

    pub fn best<I: IntoIterator<Item = f64>>(self, values: I) -> Option<f64> {
        values
            .into_iter()
            .reduce(|a, b| if self.improves(b, a) { b } else { a })
    }

    pub fn worst<I: IntoIterator<Item = f64>>(self, values: I) -> Option<f64> {
        values
            .into_iter()
            .reduce(|a, b| if self.improves(a, b) { b } else { a })
    }
}

/// One `i:rt|fv` token of a meta-data data line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance_id: i64,
    pub used_budget: u64,
    pub best_value: f64,
}

/// One "three-line" block of a `.info` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaEntry {
    pub suite: Option<String>,
    pub func_id: u32,
    pub dimension: u32,
    pub alg_id: String,
    /// Header pairs other than the suite and the three mandatory keys, in
    /// file order.
    pub extra: Vec<(String, String)>,
    /// The `%` line, verbatim.
    pub comment: Option<String>,
    pub data_path: String,
    pub instances: Vec<InstanceRecord>,
}

/// One logged row of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub evals: u64,
    pub best_so_far: f64,
    pub current: Option<f64>,
    /// Values of the run's parameter columns, in [`TraceRun::param_names`]
    /// order.
    pub params: Vec<f64>,
}

/// Trajectory of one independent run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRun {
    pub instance_id: Option<i64>,
    pub param_names: Vec<String>,
    pub records: Vec<Record>,
}

impl TraceRun {
    /// Used budget: the evaluation count of the final record.
    pub fn budget(&self) -> u64 {
        self.records.last().map_or(0, |r| r.evals)
    }

    pub fn final_value(&self) -> Option<f64> {
        self.records.last().map(|r| r.best_so_far)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.param_names.iter().position(|p| p == name)
    }

    pub fn has_current(&self) -> bool {
        self.records.first().is_some_and(|r| r.current.is_some())
    }
}

/// All runs of one algorithm on one function in one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSet {
    pub alg_id: String,
    pub func_id: u32,
    pub dimension: u32,
    pub suite: Option<String>,
    pub direction: Direction,
    pub runs: Vec<TraceRun>,
    pub param_names: Vec<String>,
}

impl DataSet {
    pub fn budgets(&self) -> Vec<u64> {
        self.runs.iter().map(TraceRun::budget).collect()
    }

    pub fn final_values(&self) -> Vec<f64> {
        self.runs.iter().filter_map(TraceRun::final_value).collect()
    }

    pub fn max_budget(&self) -> u64 {
        self.runs.iter().map(TraceRun::budget).max().unwrap_or(0)
    }

    pub fn min_first_evals(&self) -> u64 {
        self.runs
            .iter()
            .filter_map(|r| r.records.first().map(|x| x.evals))
            .min()
            .unwrap_or(0)
    }

    /// Every best-so-far value recorded in any run.
    pub fn recorded_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.runs.iter().flat_map(|r| r.records.iter().map(|x| x.best_so_far))
    }

    pub fn key(&self) -> (&str, u32, u32) {
        (&self.alg_id, self.func_id, self.dimension)
    }
}

/// Every data set loaded from one experiment, ordered by
/// `(algId, funcId, DIM)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DataSetCollection {
    datasets: Vec<DataSet>,
}

impl DataSetCollection {
    pub fn new(mut datasets: Vec<DataSet>) -> Self {
        datasets.sort_by(|a, b| a.key().cmp(&b.key()));
        Self { datasets }
    }

    pub fn datasets(&self) -> &[DataSet] {
        &self.datasets
    }

    pub fn len(&self) -> usize {
        self.datasets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.datasets.is_empty()
    }

    pub fn get(&self, alg_id: &str, func_id: u32, dimension: u32) -> Option<&DataSet> {
        self.datasets
            .binary_search_by(|d| d.key().cmp(&(alg_id, func_id, dimension)))
            .ok()
            .map(|i| &self.datasets[i])
    }

    pub fn algorithms(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.datasets.iter().map(|d| d.alg_id.as_str()).collect();
        set.into_iter().map(String::from).collect()
    }

    pub fn functions(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.datasets.iter().map(|d| d.func_id).collect();
        set.into_iter().collect()
    }

    pub fn dimensions(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.datasets.iter().map(|d| d.dimension).collect();
        set.into_iter().collect()
    }

    /// Data sets for one function and dimension, optionally restricted to
    /// the named algorithms.
    pub fn select(&self, func_id: u32, dimension: u32, algs: &[String]) -> Vec<&DataSet> {
        self.datasets
            .iter()
            .filter(|d| d.func_id == func_id && d.dimension == dimension)
            .filter(|d| algs.is_empty() || algs.contains(&d.alg_id))
            .collect()
    }

    /// Data sets of one dimension (every function), optionally restricted
    /// to the named algorithms.
    pub fn select_dimension(&self, dimension: u32, algs: &[String]) -> Vec<&DataSet> {
        self.datasets
            .iter()
            .filter(|d| d.dimension == dimension)
            .filter(|d| algs.is_empty() || algs.contains(&d.alg_id))
            .collect()
    }
}
