use std::collections::BTreeMap;

use super::{quantile_sorted, MetricsError};
use crate::dataset::{DataSetCollection, Direction};

/// Per-function target that most algorithms can reach: for each algorithm,
/// the 2% quantile of its final best values (98% when minimizing); then the
/// largest of these over algorithms (smallest when minimizing).
pub fn radar_targets(
    collection: &DataSetCollection,
    dimension: u32,
    algs: &[String],
) -> Result<BTreeMap<u32, f64>, MetricsError> {
    let mut per_function: BTreeMap<u32, (Direction, Vec<f64>)> = BTreeMap::new();
    for ds in collection.select_dimension(dimension, algs) {
        let mut finals = ds.final_values();
        if finals.is_empty() {
            continue;
        }
        finals.sort_by(f64::total_cmp);
        let level = match ds.direction {
            Direction::Maximize => 0.02,
            Direction::Minimize => 0.98,
        };
        per_function
            .entry(ds.func_id)
            .or_insert_with(|| (ds.direction, Vec::new()))
            .1
            .push(quantile_sorted(&finals, level));
    }
    if per_function.is_empty() {
        return Err(MetricsError::NoMatchingData(format!("dimension {dimension}")));
    }
    Ok(per_function
        .into_iter()
        .map(|(f, (dir, qs))| {
            let pick = match dir {
                Direction::Maximize => qs.into_iter().fold(f64::NEG_INFINITY, f64::max),
                Direction::Minimize => qs.into_iter().fold(f64::INFINITY, f64::min),
            };
            (f, pick)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{DataSet, Record, TraceRun};

    fn ds(alg: &str, direction: Direction, finals: &[f64]) -> DataSet {
        DataSet {
            alg_id: alg.into(),
            func_id: 1,
            dimension: 5,
            suite: None,
            direction,
            param_names: vec![],
            runs: finals
                .iter()
                .map(|&f| TraceRun {
                    instance_id: None,
                    param_names: vec![],
                    records: vec![Record {
                        evals: 3,
                        best_so_far: f,
                        current: None,
                        params: vec![],
                    }],
                })
                .collect(),
        }
    }

    #[test]
    fn largest_low_quantile() {
        let c = DataSetCollection::new(vec![
            ds("A", Direction::Maximize, &[10.0, 10.0, 10.0]),
            ds("B", Direction::Maximize, &[8.0, 8.0, 8.0]),
        ]);
        assert_eq!(radar_targets(&c, 5, &[]).unwrap()[&1], 10.0);
    }

    #[test]
    fn appendix_finals_quantile() {
        // type 7: h = 4 * 0.02 = 0.08 between 28 and 32.
        let c = DataSetCollection::new(vec![ds("A", Direction::Maximize, &[28.0, 32.0, 32.0, 32.0, 32.0])]);
        let t = radar_targets(&c, 5, &[]).unwrap()[&1];
        assert!((t - (28.0 + 0.08 * 4.0)).abs() < 1e-12);
    }

    #[test]
    fn identical_algorithms() {
        let one = DataSetCollection::new(vec![ds("A", Direction::Maximize, &[1.0, 5.0, 9.0])]);
        let two = DataSetCollection::new(vec![
            ds("A", Direction::Maximize, &[1.0, 5.0, 9.0]),
            ds("B", Direction::Maximize, &[1.0, 5.0, 9.0]),
        ]);
        assert_eq!(radar_targets(&one, 5, &[]), radar_targets(&two, 5, &[]));
    }

    #[test]
    fn minimization_mirrors() {
        let c = DataSetCollection::new(vec![
            ds("A", Direction::Minimize, &[1.0, 1.0]),
            ds("B", Direction::Minimize, &[3.0, 3.0]),
        ]);
        assert_eq!(radar_targets(&c, 5, &[]).unwrap()[&1], 1.0);
        assert!(radar_targets(&c, 6, &[]).is_err());
    }
}
