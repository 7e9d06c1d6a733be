//! Fixed-target and fixed-budget views of improvement-based traces.
//!
//! Traces are step functions: a run's best-so-far value holds from the
//! record that set it until the next record. Nothing here interpolates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{DataSet, Direction, TraceRun};
use crate::metrics::quantile_sorted;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlignError {
    #[error("invalid range [{min}, {max}]")]
    InvalidRange { min: f64, max: f64 },
    #[error("log scale needs positive bounds, got min {0}")]
    NonPositiveForLog(f64),
    #[error("step must be positive and count at least 2")]
    InvalidSpacing,
    #[error("anchors must be finite and strictly increasing")]
    NotStrictlyIncreasing,
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("expected a {expected:?} anchor sequence")]
    WrongPerspective { expected: Perspective },
    #[error("no data to derive a default range from")]
    NoData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleChoice {
    Linear,
    Log,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Perspective {
    /// Anchors are target values; cells are hitting times.
    #[serde(rename = "target")]
    FixedTarget,
    /// Anchors are budgets; cells are best values.
    #[serde(rename = "budget")]
    FixedBudget,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    Step(f64),
    Count(usize),
}

/// Strictly increasing anchors (target values or budgets).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorSequence {
    values: Vec<f64>,
    scale: Scale,
    perspective: Perspective,
}

impl AnchorSequence {
    pub fn new(values: Vec<f64>, scale: Scale, perspective: Perspective) -> Result<Self, AlignError> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AlignError::NotStrictlyIncreasing);
        }
        if scale == Scale::Log && values[0] <= 0.0 {
            return Err(AlignError::NonPositiveForLog(values[0]));
        }
        Ok(Self {
            values,
            scale,
            perspective,
        })
    }

    /// Builds anchors from arbitrary values, sorting and de-duplicating.
    pub fn from_unsorted(mut values: Vec<f64>, perspective: Perspective) -> Result<Self, AlignError> {
        values.retain(|v| v.is_finite());
        values.sort_by(f64::total_cmp);
        values.dedup();
        Self::new(values, Scale::Linear, perspective)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn perspective(&self) -> Perspective {
        self.perspective
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Absolute slack used when deciding whether a stepped progression has
/// reached its upper bound.
const REACH_TOLERANCE: f64 = 1e-9;

/// Generates evenly spaced anchors between `min` and `max`.
///
/// A linear step sequence runs `min, min + step, ...` and ends with `max`
/// itself; if the progression lands within tolerance of `max` that last
/// value is snapped to `max`, otherwise `max` is appended. Log sequences are
/// evenly spaced in `log10`, with a step given in decades. `Auto` picks log
/// when `min > 0` and the range spans at least two orders of magnitude.
pub fn generate_sequence(
    min: f64,
    max: f64,
    spacing: Spacing,
    scale: ScaleChoice,
    perspective: Perspective,
) -> Result<AnchorSequence, AlignError> {
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(AlignError::InvalidRange { min, max });
    }
    match spacing {
        Spacing::Step(s) if !(s > 0.0 && s.is_finite()) => return Err(AlignError::InvalidSpacing),
        Spacing::Count(n) if n < 2 => return Err(AlignError::InvalidSpacing),
        _ => {}
    }
    let scale = match scale {
        ScaleChoice::Linear => Scale::Linear,
        ScaleChoice::Log => Scale::Log,
        ScaleChoice::Auto if min > 0.0 && max / min >= 100.0 => Scale::Log,
        ScaleChoice::Auto => Scale::Linear,
    };
    if scale == Scale::Log && min <= 0.0 {
        return Err(AlignError::NonPositiveForLog(min));
    }

    let (lo, hi) = match scale {
        Scale::Linear => (min, max),
        Scale::Log => (min.log10(), max.log10()),
    };
    let mut grid = match spacing {
        Spacing::Count(n) => {
            let width = hi - lo;
            (0..n)
                .map(|k| {
                    if k + 1 == n {
                        hi
                    } else {
                        lo + width * k as f64 / (n - 1) as f64
                    }
                })
                .collect::<Vec<_>>()
        }
        Spacing::Step(step) => {
            let mut grid = Vec::new();
            let mut k = 0usize;
            loop {
                let v = lo + step * k as f64;
                if v > hi + REACH_TOLERANCE {
                    break;
                }
                grid.push(v);
                k += 1;
            }
            match grid.last_mut() {
                Some(last) if (hi - *last).abs() <= REACH_TOLERANCE => *last = hi,
                _ => grid.push(hi),
            }
            grid
        }
    };
    if scale == Scale::Log {
        for v in grid.iter_mut() {
            *v = 10f64.powf(*v);
        }
        grid[0] = min;
        *grid.last_mut().expect("non-empty") = max;
    }
    AnchorSequence::new(grid, scale, perspective)
}

/// Default fixed-target anchors: ten evenly spaced values between the 25%
/// and 75% quantiles of every best-so-far value recorded in `datasets`.
/// Falls back to the full observed range, then to a single anchor, when the
/// quantiles coincide.
pub fn default_targets(datasets: &[&DataSet]) -> Result<AnchorSequence, AlignError> {
    let mut values: Vec<f64> = datasets
        .iter()
        .flat_map(|d| d.recorded_values())
        .filter(|v| v.is_finite())
        .collect();
    if values.is_empty() {
        return Err(AlignError::NoData);
    }
    values.sort_by(f64::total_cmp);
    let q25 = quantile_sorted(&values, 0.25);
    let q75 = quantile_sorted(&values, 0.75);
    let (lo, hi) = if q25 < q75 {
        (q25, q75)
    } else {
        (values[0], values[values.len() - 1])
    };
    if lo < hi {
        generate_sequence(
            lo,
            hi,
            Spacing::Count(10),
            ScaleChoice::Linear,
            Perspective::FixedTarget,
        )
    } else {
        AnchorSequence::new(vec![lo], Scale::Linear, Perspective::FixedTarget)
    }
}

/// Default fixed-budget anchors: ten budgets from the smallest first
/// evaluation to the largest used budget, log-spaced when that spans two
/// orders of magnitude.
pub fn default_budgets(datasets: &[&DataSet]) -> Result<AnchorSequence, AlignError> {
    let lo = datasets
        .iter()
        .map(|d| d.min_first_evals())
        .min()
        .ok_or(AlignError::NoData)?
        .max(1) as f64;
    let hi = datasets.iter().map(|d| d.max_budget()).max().unwrap_or(0) as f64;
    if lo < hi {
        let seq = generate_sequence(lo, hi, Spacing::Count(10), ScaleChoice::Auto, Perspective::FixedBudget)?;
        let mut rounded: Vec<f64> = seq.values().iter().map(|v| v.round()).collect();
        rounded.dedup();
        AnchorSequence::new(rounded, seq.scale(), Perspective::FixedBudget)
    } else if hi >= 1.0 {
        AnchorSequence::new(vec![hi], Scale::Linear, Perspective::FixedBudget)
    } else {
        Err(AlignError::NoData)
    }
}

/// Per-run values over an anchor sequence, for one data set.
///
/// Fixed-target cells hold hitting times (`f64::INFINITY` when the target
/// was never reached); fixed-budget cells hold best-so-far values, `None`
/// when the budget precedes the run's first record. Parameter matrices use
/// `None` for missing values.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedMatrix {
    pub alg_id: String,
    pub func_id: u32,
    pub dimension: u32,
    pub direction: Direction,
    pub anchors: AnchorSequence,
    /// `cells[run][anchor]`.
    pub cells: Vec<Vec<Option<f64>>>,
    /// Used budget per run.
    pub budgets: Vec<u64>,
}

impl AlignedMatrix {
    pub fn perspective(&self) -> Perspective {
        self.anchors.perspective()
    }

    pub fn runs(&self) -> usize {
        self.cells.len()
    }

    /// All cells at one anchor, one entry per run.
    pub fn column(&self, anchor: usize) -> Vec<Option<f64>> {
        self.cells.iter().map(|row| row[anchor]).collect()
    }

    /// Defined cells at one anchor.
    pub fn defined_column(&self, anchor: usize) -> Vec<f64> {
        self.cells.iter().filter_map(|row| row[anchor]).collect()
    }

    pub fn budgets_f64(&self) -> Vec<f64> {
        self.budgets.iter().map(|&b| b as f64).collect()
    }

    fn empty_like(ds: &DataSet, anchors: &AnchorSequence) -> Self {
        Self {
            alg_id: ds.alg_id.clone(),
            func_id: ds.func_id,
            dimension: ds.dimension,
            direction: ds.direction,
            anchors: anchors.clone(),
            cells: Vec::with_capacity(ds.runs.len()),
            budgets: ds.budgets(),
        }
    }
}

/// Index of the first record that reaches `target`, if any.
fn first_hit(run: &TraceRun, direction: Direction, target: f64) -> Option<usize> {
    let idx = run
        .records
        .partition_point(|r| !direction.reaches(r.best_so_far, target));
    (idx < run.records.len()).then_some(idx)
}

/// Index of the last record with `evals <= budget`, if any.
fn last_within(run: &TraceRun, budget: f64) -> Option<usize> {
    run.records.partition_point(|r| r.evals as f64 <= budget).checked_sub(1)
}

/// Hitting time of every run at every target. A target is reached by a
/// record whose best-so-far value equals it.
pub fn align_fixed_target(ds: &DataSet, targets: &AnchorSequence) -> Result<AlignedMatrix, AlignError> {
    if targets.perspective() != Perspective::FixedTarget {
        return Err(AlignError::WrongPerspective {
            expected: Perspective::FixedTarget,
        });
    }
    let mut out = AlignedMatrix::empty_like(ds, targets);
    for run in &ds.runs {
        out.cells.push(
            targets
                .values()
                .iter()
                .map(|&v| Some(first_hit(run, ds.direction, v).map_or(f64::INFINITY, |i| run.records[i].evals as f64)))
                .collect(),
        );
    }
    Ok(out)
}

/// Best-so-far value of every run within every budget.
pub fn align_fixed_budget(ds: &DataSet, budgets: &AnchorSequence) -> Result<AlignedMatrix, AlignError> {
    if budgets.perspective() != Perspective::FixedBudget {
        return Err(AlignError::WrongPerspective {
            expected: Perspective::FixedBudget,
        });
    }
    let mut out = AlignedMatrix::empty_like(ds, budgets);
    for run in &ds.runs {
        out.cells.push(
            budgets
                .values()
                .iter()
                .map(|&t| last_within(run, t).map(|i| run.records[i].best_so_far))
                .collect(),
        );
    }
    Ok(out)
}

/// Value of a tracked parameter at every anchor: at the record first hitting
/// the target (fixed-target) or the last record within the budget
/// (fixed-budget).
pub fn align_parameter(ds: &DataSet, anchors: &AnchorSequence, param: &str) -> Result<AlignedMatrix, AlignError> {
    if !ds.param_names.iter().any(|p| p == param) {
        return Err(AlignError::UnknownParameter(param.to_string()));
    }
    let mut out = AlignedMatrix::empty_like(ds, anchors);
    for run in &ds.runs {
        let col = run.param_index(param);
        out.cells.push(
            anchors
                .values()
                .iter()
                .map(|&a| {
                    let col = col?;
                    let idx = match anchors.perspective() {
                        Perspective::FixedTarget => first_hit(run, ds.direction, a),
                        Perspective::FixedBudget => last_within(run, a),
                    }?;
                    run.records[idx].params.get(col).copied()
                })
                .collect(),
        );
    }
    Ok(out)
}
