use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{glicko2_game_update, ComparisonError, GlickoState, Preference, Score};
use crate::scalar::Scalar;

pub const DEFAULT_ROUNDS: usize = 25;
pub const DEFAULT_SEED: u64 = 42;

/// Samples of every algorithm on one (function, dimension) problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RankProblem {
    pub label: String,
    /// Indexed like the algorithm list; `None` or an empty sample means the
    /// algorithm sits out this problem.
    pub samples: Vec<Option<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry<T> {
    pub alg_id: String,
    pub state: GlickoState<T>,
    pub games: usize,
}

/// Glicko-2 ranking from simulated games.
///
/// Each round, every pair of algorithms present on a problem plays one game
/// per problem using one uniformly drawn sample point each. All games of a
/// round form one rating period. Entries are returned by descending rating,
/// ties broken by algorithm id.
pub fn glicko2_rank<T: Scalar>(
    algorithms: &[String],
    problems: &[RankProblem],
    preference: Preference,
    rounds: usize,
    seed: u64,
    tau: T,
) -> Result<Vec<RankEntry<T>>, ComparisonError> {
    let k = algorithms.len();
    if k < 2 {
        return Err(ComparisonError::FewerThanTwoAlgorithms(k));
    }
    if rounds == 0 {
        return Err(ComparisonError::InvalidRounds);
    }
    let samples: Vec<Vec<Option<&[f64]>>> = problems
        .iter()
        .map(|p| {
            (0..k)
                .map(|i| match p.samples.get(i) {
                    Some(Some(s)) if !s.is_empty() => Some(s.as_slice()),
                    _ => None,
                })
                .collect()
        })
        .collect();
    if samples.iter().flatten().flatten().any(|s| s.iter().any(|x| x.is_nan())) {
        return Err(ComparisonError::NanInSample);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = vec![GlickoState::<T>::initial(); k];
    let mut played = vec![0usize; k];
    for _ in 0..rounds {
        let mut games: Vec<Vec<(usize, Score)>> = vec![Vec::new(); k];
        for problem in &samples {
            for i in 0..k {
                let Some(a) = problem[i] else { continue };
                for j in i + 1..k {
                    let Some(b) = problem[j] else { continue };
                    let x = a[rng.gen_range(0..a.len())];
                    let y = b[rng.gen_range(0..b.len())];
                    let score = preference.score(x, y);
                    games[i].push((j, score));
                    games[j].push((i, score.reversed()));
                }
            }
        }
        let next = (0..k)
            .map(|i| {
                let opponents: Vec<_> = games[i].iter().map(|&(j, s)| (states[j], s)).collect();
                played[i] += opponents.len();
                glicko2_game_update(&states[i], &opponents, tau)
            })
            .collect::<Result<Vec<_>, _>>()?;
        states = next;
    }

    let mut entries: Vec<RankEntry<T>> = algorithms
        .iter()
        .zip(states)
        .zip(played)
        .map(|((alg, state), games)| RankEntry {
            alg_id: alg.clone(),
            state,
            games,
        })
        .collect();
    entries.sort_by(|a, b| {
        b.state
            .rating
            .partial_cmp(&a.state.rating)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.alg_id.cmp(&b.alg_id))
    });
    Ok(entries)
}
