use std::collections::BTreeMap;

use serde::Serialize;

use super::MetricsError;
use crate::alignment::{AlignedMatrix, Perspective};
use crate::dataset::Direction;
use crate::scalar::{Proportion, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EcdfScope {
    SingleTarget,
    MultiTarget,
    MultiFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EcdfMeta {
    pub alg_id: Option<String>,
    pub scope: EcdfScope,
    pub perspective: Perspective,
    /// Anchors aggregated over, per function.
    pub target_map: BTreeMap<u32, Vec<f64>>,
}

/// Empirical cumulative distribution evaluated on a grid.
///
/// For fixed-target curves the grid holds budgets and the ordinate is the
/// fraction of (run, target) pairs whose hitting time is within the budget.
/// For fixed-budget curves the grid holds function values and the ordinate
/// is the fraction of (run, budget) pairs whose best value reaches it.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfCurve<T, P> {
    pub grid: Vec<T>,
    pub proportion: Vec<P>,
    pub meta: EcdfMeta,
}

fn check_grid<T: Scalar>(grid: &[T]) -> Result<(), MetricsError> {
    if grid.iter().any(|g| g.is_nan()) || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(MetricsError::UnsortedGrid);
    }
    Ok(())
}

/// Sorted successes, ready for counting by binary search.
struct Pool {
    values: Vec<f64>,
    pairs: usize,
    perspective: Perspective,
    direction: Direction,
}

impl Pool {
    fn new(perspective: Perspective, direction: Direction) -> Self {
        Self {
            values: Vec::new(),
            pairs: 0,
            perspective,
            direction,
        }
    }

    fn add(&mut self, m: &AlignedMatrix) {
        self.pairs += m.runs() * m.anchors.len();
        let finite = m.cells.iter().flatten().flatten().filter(|v| v.is_finite());
        self.values.extend(finite);
    }

    fn count_at(&self, x: f64) -> usize {
        match (self.perspective, self.direction) {
            (Perspective::FixedTarget, _) | (Perspective::FixedBudget, Direction::Minimize) => {
                self.values.partition_point(|&v| v <= x)
            }
            (Perspective::FixedBudget, Direction::Maximize) => {
                self.values.len() - self.values.partition_point(|&v| v < x)
            }
        }
    }

    fn sorted(mut self) -> Self {
        self.values.sort_by(f64::total_cmp);
        self
    }

    fn curve<T: Scalar, P: Proportion>(self, grid: &[T], meta: EcdfMeta) -> EcdfCurve<T, P> {
        let pool = self.sorted();
        let proportion = grid
            .iter()
            .map(|g| P::ratio(pool.count_at(g.to_f64().unwrap_or(f64::NAN)), pool.pairs))
            .collect();
        EcdfCurve {
            grid: grid.to_vec(),
            proportion,
            meta,
        }
    }
}

/// ECDF of one sample of hitting times: the fraction of runs with a finite
/// time not above each grid point.
pub fn ecdf_single<T: Scalar, P: Proportion>(times: &[T], grid: &[T]) -> Result<EcdfCurve<T, P>, MetricsError> {
    if times.is_empty() {
        return Err(MetricsError::EmptySample);
    }
    check_grid(grid)?;
    let mut finite: Vec<T> = times.iter().copied().filter(|t| t.is_finite()).collect();
    finite.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    let proportion = grid
        .iter()
        .map(|&g| P::ratio(finite.partition_point(|&t| t <= g), times.len()))
        .collect();
    Ok(EcdfCurve {
        grid: grid.to_vec(),
        proportion,
        meta: EcdfMeta {
            alg_id: None,
            scope: EcdfScope::SingleTarget,
            perspective: Perspective::FixedTarget,
            target_map: BTreeMap::new(),
        },
    })
}

/// ECDF aggregated over every anchor of `aligned`: the fraction of
/// (run, anchor) pairs that succeed at each grid point.
pub fn ecdf_targets<T: Scalar, P: Proportion>(
    aligned: &AlignedMatrix,
    grid: &[T],
) -> Result<EcdfCurve<T, P>, MetricsError> {
    if aligned.runs() == 0 {
        return Err(MetricsError::EmptySample);
    }
    check_grid(grid)?;
    let mut pool = Pool::new(aligned.perspective(), aligned.direction);
    pool.add(aligned);
    let scope = if aligned.anchors.len() == 1 {
        EcdfScope::SingleTarget
    } else {
        EcdfScope::MultiTarget
    };
    Ok(pool.curve(
        grid,
        EcdfMeta {
            alg_id: Some(aligned.alg_id.clone()),
            scope,
            perspective: aligned.perspective(),
            target_map: BTreeMap::from([(aligned.func_id, aligned.anchors.values().to_vec())]),
        },
    ))
}

/// ECDF aggregated over functions and their anchors: the mean of the
/// per-function curves weighted by each function's number of anchors. With
/// equal run counts this is the fraction of successful
/// (function, anchor, run) triples. All matrices must belong to one
/// algorithm and one perspective.
pub fn ecdf_functions<T: Scalar, P: Proportion>(
    per_function: &[AlignedMatrix],
    grid: &[T],
) -> Result<EcdfCurve<T, P>, MetricsError> {
    let first = per_function.first().ok_or(MetricsError::EmptySample)?;
    if per_function
        .iter()
        .any(|m| m.alg_id != first.alg_id || m.perspective() != first.perspective() || m.direction != first.direction)
    {
        return Err(MetricsError::IncompatibleMatrices);
    }
    if per_function.iter().any(|m| m.runs() == 0) {
        return Err(MetricsError::EmptySample);
    }
    check_grid(grid)?;
    let mut pools = Vec::with_capacity(per_function.len());
    let mut target_map: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for m in per_function {
        let mut pool = Pool::new(m.perspective(), m.direction);
        pool.add(m);
        pools.push((pool.sorted(), m.runs()));
        target_map
            .entry(m.func_id)
            .or_default()
            .extend_from_slice(m.anchors.values());
    }
    let anchors: usize = per_function.iter().map(|m| m.anchors.len()).sum();
    let total = P::from_usize(anchors).expect("count out of range");
    let proportion = grid
        .iter()
        .map(|g| {
            let x = g.to_f64().unwrap_or(f64::NAN);
            let weighted = pools
                .iter()
                .fold(P::zero(), |acc, (pool, runs)| acc + P::ratio(pool.count_at(x), *runs));
            weighted / total.clone()
        })
        .collect();
    Ok(EcdfCurve {
        grid: grid.to_vec(),
        proportion,
        meta: EcdfMeta {
            alg_id: Some(first.alg_id.clone()),
            scope: EcdfScope::MultiFunction,
            perspective: first.perspective(),
            target_map,
        },
    })
}

/// Sorted union of every finite defined cell of the matrices.
pub fn default_grid<'a, I>(matrices: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a AlignedMatrix>,
{
    let mut grid: Vec<f64> = matrices
        .into_iter()
        .flat_map(|m| m.cells.iter().flatten().flatten().copied())
        .filter(|v| v.is_finite())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Normalized area under a step-function ECDF over `[t_min, t_max]` on a
/// `log10` abscissa, integrated with the trapezoidal rule through the grid
/// points. Below the first grid point the curve takes its first value.
pub fn ecdf_auc<T: Scalar>(curve: &EcdfCurve<T, T>, t_min: T, t_max: T) -> Result<T, MetricsError> {
    let degenerate = || MetricsError::DegenerateRange {
        min: t_min.to_f64().unwrap_or(f64::NAN),
        max: t_max.to_f64().unwrap_or(f64::NAN),
    };
    if !(t_min >= T::one() && t_min < t_max && t_max.is_finite()) {
        return Err(degenerate());
    }
    if curve.grid.is_empty() || curve.grid.len() != curve.proportion.len() {
        return Err(MetricsError::EmptySample);
    }
    check_grid(&curve.grid)?;
    let value_at = |t: T| {
        let i = curve.grid.partition_point(|&g| g <= t);
        curve.proportion[i.saturating_sub(1)]
    };
    let mut xs = vec![t_min];
    xs.extend(curve.grid.iter().copied().filter(|&g| g > t_min && g < t_max));
    xs.push(t_max);

    let two = T::lit(2.0);
    let mut area = T::zero();
    for w in xs.windows(2) {
        let dx = w[1].log10() - w[0].log10();
        area = area + dx * (value_at(w[0]) + value_at(w[1])) / two;
    }
    Ok(area / (t_max / t_min).log10())
}
