//! Statistical comparison of algorithms.

mod glicko;
mod ks;
mod pairwise;
mod rank;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use glicko::{glicko2_game_update, GlickoState, Score, DEFAULT_TAU, GLICKO_SCALE};
pub use ks::{kolmogorov_tail, ks_statistic, ks_two_sample};
pub use pairwise::{pairwise_ks, ComparisonSample, Decision, KsResult, PairwiseKs, DEFAULT_ALPHA};
pub use rank::{glicko2_rank, RankEntry, RankProblem, DEFAULT_ROUNDS, DEFAULT_SEED};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComparisonError {
    #[error("empty sample")]
    EmptySample,
    #[error("sample contains NaN")]
    NanInSample,
    #[error("need at least two algorithms, got {0}")]
    FewerThanTwoAlgorithms(usize),
    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("number of rounds must be at least 1")]
    InvalidRounds,
    #[error("tau must be positive, got {0}")]
    InvalidTau(f64),
    #[error("volatility iteration did not converge within {0} steps")]
    VolatilitySolverNoConvergence(usize),
}

/// Which end of a sample is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preference {
    /// Hitting times, or values under minimization. Infinity is worst.
    LowerIsBetter,
    /// Values under maximization.
    HigherIsBetter,
}

impl Preference {
    /// Game score of `a` against `b`.
    pub fn score(self, a: f64, b: f64) -> Score {
        let (a, b) = match self {
            Preference::LowerIsBetter => (a, b),
            Preference::HigherIsBetter => (b, a),
        };
        if a < b {
            Score::Win
        } else if a > b {
            Score::Loss
        } else {
            Score::Draw
        }
    }
}
