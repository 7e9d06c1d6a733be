use serde::Serialize;

use super::{quantile_sorted, MetricsError};
use crate::dataset::DataSetCollection;

/// Range of function values reached by one algorithm on one problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OverviewRow {
    pub alg_id: String,
    pub func_id: u32,
    pub dimension: u32,
    pub runs: usize,
    /// Worst best-so-far value logged in any record of any run.
    pub worst_recorded: f64,
    /// Worst final value over runs.
    pub worst_reached: f64,
    /// Best final value over runs.
    pub best_reached: f64,
    pub mean_reached: f64,
    pub median_reached: f64,
    /// Runs whose final value attains `best_reached`.
    pub succ: usize,
    pub min_budget: u64,
    pub max_budget: u64,
}

/// One row per algorithm with data on `func_id` in `dimension`.
pub fn data_overview(
    collection: &DataSetCollection,
    func_id: u32,
    dimension: u32,
    algs: &[String],
) -> Result<Vec<OverviewRow>, MetricsError> {
    let selected = collection.select(func_id, dimension, algs);
    if selected.is_empty() {
        return Err(MetricsError::NoMatchingData(format!(
            "function {func_id} in dimension {dimension}"
        )));
    }
    let rows = selected
        .into_iter()
        .map(|ds| {
            let dir = ds.direction;
            let finals = ds.final_values();
            let best = dir.best(finals.iter().copied()).unwrap_or(f64::NAN);
            let mut sorted = finals.clone();
            sorted.sort_by(f64::total_cmp);
            let budgets = ds.budgets();
            OverviewRow {
                alg_id: ds.alg_id.clone(),
                func_id: ds.func_id,
                dimension: ds.dimension,
                runs: ds.runs.len(),
                worst_recorded: dir.worst(ds.recorded_values()).unwrap_or(f64::NAN),
                worst_reached: dir.worst(finals.iter().copied()).unwrap_or(f64::NAN),
                best_reached: best,
                mean_reached: finals.iter().sum::<f64>() / finals.len() as f64,
                median_reached: quantile_sorted(&sorted, 0.5),
                succ: finals.iter().filter(|&&f| dir.reaches(f, best)).count(),
                min_budget: budgets.iter().copied().min().unwrap_or(0),
                max_budget: budgets.iter().copied().max().unwrap_or(0),
            }
        })
        .collect();
    Ok(rows)
}
