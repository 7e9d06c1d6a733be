use rayon::prelude::*;
use serde::Serialize;

use super::{ks_two_sample, ComparisonError, Preference};
use crate::scalar::Scalar;

pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    LeftDominates,
    RightDominates,
    NoDecision,
}

impl Decision {
    fn mirrored(self) -> Self {
        match self {
            Decision::LeftDominates => Decision::RightDominates,
            Decision::RightDominates => Decision::LeftDominates,
            Decision::NoDecision => Decision::NoDecision,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsResult<T> {
    pub statistic: T,
    pub p_raw: T,
    /// Bonferroni-adjusted: `min(1, m p_raw)` with `m` unordered pairs.
    pub p_corrected: T,
    pub decision: Decision,
}

/// Samples of one algorithm at one target (or budget).
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSample<T> {
    pub alg_id: String,
    pub values: Vec<T>,
    /// Per-run budgets charged to failed runs when ranking by mean. May be
    /// empty when the sample has no failures.
    pub budgets: Vec<T>,
}

impl<T: Scalar> ComparisonSample<T> {
    /// PAR-1 for hitting times, plain mean otherwise.
    fn penalized_mean(&self) -> T {
        let sum = self.values.iter().enumerate().fold(T::zero(), |acc, (i, &v)| {
            let v = if v.is_finite() {
                v
            } else {
                self.budgets.get(i).copied().unwrap_or(v)
            };
            acc + v
        });
        sum / T::from_count(self.values.len())
    }
}

/// Every pairwise test plus the partial order of significant wins.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseKs<T> {
    pub algorithms: Vec<String>,
    pub alpha: T,
    /// `results[i][j]` compares algorithm `i` (left) with `j` (right);
    /// `None` on the diagonal.
    pub results: Vec<Vec<Option<KsResult<T>>>>,
    /// `(winner, loser)` index pairs.
    pub edges: Vec<(usize, usize)>,
}

impl<T> PairwiseKs<T> {
    pub fn pairs(&self) -> usize {
        let k = self.algorithms.len();
        k * (k - 1) / 2
    }
}

/// Two-sided KS test between every pair of algorithms, Bonferroni-corrected
/// over the `k (k - 1) / 2` pairs. A significant pair is oriented towards
/// the algorithm with the better penalized mean.
pub fn pairwise_ks<T: Scalar>(
    samples: &[ComparisonSample<T>],
    alpha: T,
    preference: Preference,
) -> Result<PairwiseKs<T>, ComparisonError> {
    let k = samples.len();
    if k < 2 {
        return Err(ComparisonError::FewerThanTwoAlgorithms(k));
    }
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(ComparisonError::InvalidAlpha(alpha.to_f64().unwrap_or(f64::NAN)));
    }
    let m = T::from_count(k * (k - 1) / 2);
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();

    let tested = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (left, right) = (&samples[i], &samples[j]);
            let (statistic, p_raw) = ks_two_sample(&left.values, &right.values)?;
            let p_corrected = (m * p_raw).min(T::one());
            let decision = if p_corrected < alpha {
                let (l, r) = (left.penalized_mean(), right.penalized_mean());
                let left_better = match preference {
                    Preference::LowerIsBetter => l < r,
                    Preference::HigherIsBetter => l > r,
                };
                let right_better = match preference {
                    Preference::LowerIsBetter => r < l,
                    Preference::HigherIsBetter => r > l,
                };
                if left_better {
                    Decision::LeftDominates
                } else if right_better {
                    Decision::RightDominates
                } else {
                    Decision::NoDecision
                }
            } else {
                Decision::NoDecision
            };
            Ok(KsResult {
                statistic,
                p_raw,
                p_corrected,
                decision,
            })
        })
        .collect::<Result<Vec<_>, ComparisonError>>()?;

    let mut results: Vec<Vec<Option<KsResult<T>>>> = vec![vec![None; k]; k];
    let mut edges = Vec::new();
    for (&(i, j), r) in pairs.iter().zip(tested) {
        match r.decision {
            Decision::LeftDominates => edges.push((i, j)),
            Decision::RightDominates => edges.push((j, i)),
            Decision::NoDecision => {}
        }
        results[j][i] = Some(KsResult {
            decision: r.decision.mirrored(),
            ..r.clone()
        });
        results[i][j] = Some(r);
    }
    edges.sort_unstable();

    Ok(PairwiseKs {
        algorithms: samples.iter().map(|s| s.alg_id.clone()).collect(),
        alpha,
        results,
        edges,
    })
}
