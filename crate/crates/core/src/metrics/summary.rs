use super::{ert, par_c, quantile_sorted, success_rate, MetricsError, QUANTILE_LEVELS};
use crate::alignment::{AlignedMatrix, Perspective};
use crate::scalar::Scalar;

/// Moments and quantiles of a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary<T> {
    pub n: usize,
    pub mean: T,
    pub median: T,
    /// Sample standard deviation; `None` for a single value.
    pub sd: Option<T>,
    /// Quantiles at [`QUANTILE_LEVELS`].
    pub quantiles: [T; 9],
}

impl<T: Scalar> SampleSummary<T> {
    /// `None` for an empty sample. Non-finite values must be removed by the
    /// caller.
    pub fn from_sample(sample: &[T]) -> Option<Self> {
        if sample.is_empty() {
            return None;
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in sample"));
        let n = sorted.len();
        let nf = T::from_count(n);
        let mean = sorted.iter().fold(T::zero(), |a, &b| a + b) / nf;
        let sd = (n > 1).then(|| {
            let ss = sorted.iter().fold(T::zero(), |a, &b| a + (b - mean) * (b - mean));
            (ss / T::from_count(n - 1)).sqrt()
        });
        let quantiles = QUANTILE_LEVELS.map(|p| quantile_sorted(&sorted, T::lit(p)));
        Some(Self {
            n,
            mean,
            median: quantile_sorted(&sorted, T::lit(0.5)),
            sd,
            quantiles,
        })
    }
}

/// Statistics at one anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct StatRow<T> {
    pub anchor: T,
    pub runs: usize,
    /// Runs that reached the target. Fixed-budget rows carry this only when a
    /// target value was supplied.
    pub success_count: Option<usize>,
    pub success_rate: Option<T>,
    /// Over successful runs only (fixed-target) or over defined values
    /// (fixed-budget).
    pub summary: Option<SampleSummary<T>>,
    /// Penalized average runtime with `c = 1`; fixed-target only.
    pub par1: Option<T>,
    /// Expected running time, possibly infinite; fixed-target only.
    pub ert: Option<T>,
}

fn to_scalar<T: Scalar>(x: f64) -> T {
    T::from_f64(x).unwrap_or_else(T::nan)
}

/// One row per anchor of `aligned`.
///
/// Fixed-target rows describe the finite hitting times and report success
/// rate, PAR-1 and ERT over all runs. Fixed-budget rows describe the
/// defined best values; when `target` is given, a run succeeds at a budget
/// if its value reaches the target there.
pub fn summarize<T: Scalar>(aligned: &AlignedMatrix, target: Option<f64>) -> Result<Vec<StatRow<T>>, MetricsError> {
    if aligned.runs() == 0 {
        return Err(MetricsError::EmptySample);
    }
    let budgets: Vec<T> = aligned.budgets.iter().map(|&b| to_scalar(b as f64)).collect();
    let mut rows = Vec::with_capacity(aligned.anchors.len());
    for (j, &anchor) in aligned.anchors.values().iter().enumerate() {
        let column = aligned.column(j);
        let row = match aligned.perspective() {
            Perspective::FixedTarget => {
                let times: Vec<T> = column.iter().map(|c| c.map_or_else(T::infinity, to_scalar)).collect();
                let finite: Vec<T> = times.iter().copied().filter(|t| t.is_finite()).collect();
                let (rate, count) = success_rate(&times)?;
                StatRow {
                    anchor: to_scalar(anchor),
                    runs: times.len(),
                    success_count: Some(count),
                    success_rate: Some(rate),
                    summary: SampleSummary::from_sample(&finite),
                    par1: Some(par_c(&times, &budgets, T::one())?),
                    ert: Some(ert(&times, &budgets)?),
                }
            }
            Perspective::FixedBudget => {
                let defined: Vec<T> = column.iter().flatten().map(|&v| to_scalar(v)).collect();
                let success = target.map(|v| {
                    column
                        .iter()
                        .flatten()
                        .filter(|&&x| aligned.direction.reaches(x, v))
                        .count()
                });
                StatRow {
                    anchor: to_scalar(anchor),
                    runs: column.len(),
                    success_count: success,
                    success_rate: success.map(|s| T::from_count(s) / T::from_count(column.len())),
                    summary: SampleSummary::from_sample(&defined),
                    par1: None,
                    ert: None,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Moments and quantiles of the defined cells at each anchor, without any
/// success accounting. Used for parameter matrices.
pub fn describe<T: Scalar>(aligned: &AlignedMatrix) -> Vec<StatRow<T>> {
    aligned
        .anchors
        .values()
        .iter()
        .enumerate()
        .map(|(j, &anchor)| {
            let column = aligned.column(j);
            let defined: Vec<T> = column
                .iter()
                .flatten()
                .filter(|v| v.is_finite())
                .map(|&v| to_scalar(v))
                .collect();
            StatRow {
                anchor: to_scalar(anchor),
                runs: column.len(),
                success_count: None,
                success_rate: None,
                summary: SampleSummary::from_sample(&defined),
                par1: None,
                ert: None,
            }
        })
        .collect()
}
