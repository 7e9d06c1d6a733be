//! Request-level helpers shared by the command line and the HTTP service:
//! resolving selections and anchor ranges against a loaded collection and
//! running the statistics for every selected algorithm.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alignment::{
    align_fixed_budget, align_fixed_target, align_parameter, default_budgets, default_targets, generate_sequence,
    AlignedMatrix, AnchorSequence, Perspective, Scale, ScaleChoice, Spacing,
};
use crate::comparison::{
    glicko2_rank, pairwise_ks, ComparisonSample, PairwiseKs, Preference, RankEntry, RankProblem, DEFAULT_TAU,
};
use crate::dataset::{DataSet, DataSetCollection, Direction};
use crate::error::{Error, Result};
use crate::metrics::{
    default_grid, describe, ecdf_auc, ecdf_functions, ecdf_targets, fd_bins, histogram, kde_auto, radar_targets,
    summarize, Bins, DensityEstimate, EcdfCurve, StatRow,
};

/// Algorithms and problem a request refers to. Missing fields are filled
/// with the first dimension and function present in the data; an empty
/// algorithm list means every algorithm.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Selection {
    pub func_id: Option<u32>,
    pub dimension: Option<u32>,
    #[serde(default)]
    pub algorithms: Vec<String>,
}

/// A selection with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Resolved {
    pub func_id: u32,
    pub dimension: u32,
    pub algorithms: Vec<String>,
}

impl Resolved {
    pub fn datasets<'a>(&self, collection: &'a DataSetCollection) -> Vec<&'a DataSet> {
        self.algorithms
            .iter()
            .filter_map(|a| collection.get(a, self.func_id, self.dimension))
            .collect()
    }
}

fn check_known_algorithms(collection: &DataSetCollection, algs: &[String]) -> Result<()> {
    let known = collection.algorithms();
    match algs.iter().find(|a| !known.contains(a)) {
        Some(a) => Err(Error::NoMatchingData(format!("algorithm `{a}`"))),
        None => Ok(()),
    }
}

fn resolve_dimension(collection: &DataSetCollection, sel: &Selection) -> Result<u32> {
    let dims = collection.dimensions();
    match sel.dimension {
        Some(d) if dims.contains(&d) => Ok(d),
        Some(d) => Err(Error::NoMatchingData(format!("dimension {d}"))),
        None => dims
            .first()
            .copied()
            .ok_or_else(|| Error::NoMatchingData("empty collection".into())),
    }
}

/// Resolves a single-problem selection.
pub fn resolve(collection: &DataSetCollection, sel: &Selection) -> Result<Resolved> {
    check_known_algorithms(collection, &sel.algorithms)?;
    let dimension = resolve_dimension(collection, sel)?;
    let in_dim = collection.select_dimension(dimension, &sel.algorithms);
    let func_id = match sel.func_id {
        Some(f) => f,
        None => in_dim
            .iter()
            .map(|d| d.func_id)
            .min()
            .ok_or_else(|| Error::NoMatchingData(format!("dimension {dimension}")))?,
    };
    let selected = collection.select(func_id, dimension, &sel.algorithms);
    if selected.is_empty() {
        return Err(Error::NoMatchingData(format!(
            "function {func_id} in dimension {dimension}"
        )));
    }
    Ok(Resolved {
        func_id,
        dimension,
        algorithms: selected.iter().map(|d| d.alg_id.clone()).collect(),
    })
}

/// Resolves a dimension-wide selection; the function field is ignored.
pub fn resolve_dimension_wide(collection: &DataSetCollection, sel: &Selection) -> Result<(u32, Vec<String>)> {
    check_known_algorithms(collection, &sel.algorithms)?;
    let dimension = resolve_dimension(collection, sel)?;
    let mut algs: Vec<String> = collection
        .select_dimension(dimension, &sel.algorithms)
        .iter()
        .map(|d| d.alg_id.clone())
        .collect();
    algs.sort();
    algs.dedup();
    if algs.is_empty() {
        return Err(Error::NoMatchingData(format!("dimension {dimension}")));
    }
    Ok((dimension, algs))
}

/// Anchor range as typed by a user. Unset bounds come from the data; with
/// no spacing, ten anchors are generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RangeSpec {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub step: Option<f64>,
    pub count: Option<usize>,
    pub scale: ScaleChoice,
}

impl Default for RangeSpec {
    fn default() -> Self {
        Self {
            min: None,
            max: None,
            step: None,
            count: None,
            scale: ScaleChoice::Auto,
        }
    }
}

impl RangeSpec {
    pub fn is_default(&self) -> bool {
        self.min.is_none() && self.max.is_none() && self.step.is_none() && self.count.is_none()
    }
}

const DEFAULT_COUNT: usize = 10;

/// Turns a range specification into anchors for `perspective`.
pub fn resolve_anchors(datasets: &[&DataSet], perspective: Perspective, spec: &RangeSpec) -> Result<AnchorSequence> {
    let defaults = || -> Result<AnchorSequence> {
        Ok(match perspective {
            Perspective::FixedTarget => default_targets(datasets)?,
            Perspective::FixedBudget => default_budgets(datasets)?,
        })
    };
    if spec.is_default() {
        return defaults();
    }
    let spacing = match (spec.step, spec.count) {
        (Some(_), Some(_)) => return Err(Error::InvalidArgument("give either step or count, not both".into())),
        (Some(s), None) => Spacing::Step(s),
        (None, Some(n)) => Spacing::Count(n),
        (None, None) => Spacing::Count(DEFAULT_COUNT),
    };
    let (min, max) = match (spec.min, spec.max) {
        (Some(lo), Some(hi)) => (lo, hi),
        (lo, hi) => {
            let d = defaults()?;
            let v = d.values();
            (lo.unwrap_or(v[0]), hi.unwrap_or(v[v.len() - 1]))
        }
    };
    if min == max && min.is_finite() {
        let scale = match spec.scale {
            ScaleChoice::Log if min > 0.0 => Scale::Log,
            _ => Scale::Linear,
        };
        return Ok(AnchorSequence::new(vec![min], scale, perspective)?);
    }
    Ok(generate_sequence(min, max, spacing, spec.scale, perspective)?)
}

pub fn align(ds: &DataSet, anchors: &AnchorSequence) -> Result<AlignedMatrix> {
    Ok(match anchors.perspective() {
        Perspective::FixedTarget => align_fixed_target(ds, anchors)?,
        Perspective::FixedBudget => align_fixed_budget(ds, anchors)?,
    })
}

/// Aligns each selected algorithm on the resolved problem.
pub fn aligned_matrices(
    collection: &DataSetCollection,
    resolved: &Resolved,
    anchors: &AnchorSequence,
) -> Result<Vec<AlignedMatrix>> {
    resolved
        .datasets(collection)
        .into_iter()
        .map(|ds| align(ds, anchors))
        .collect()
}

/// Per-algorithm statistics table.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmStats {
    pub alg_id: String,
    pub rows: Vec<StatRow<f64>>,
}

pub fn stats(
    collection: &DataSetCollection,
    resolved: &Resolved,
    anchors: &AnchorSequence,
    success_target: Option<f64>,
) -> Result<Vec<AlgorithmStats>> {
    aligned_matrices(collection, resolved, anchors)?
        .iter()
        .map(|m| {
            Ok(AlgorithmStats {
                alg_id: m.alg_id.clone(),
                rows: summarize(m, success_target)?,
            })
        })
        .collect()
}

/// Parameter statistics per algorithm and parameter name.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterStats {
    pub alg_id: String,
    pub parameter: String,
    pub rows: Vec<StatRow<f64>>,
}

/// Statistics of recorded parameters at each anchor. An empty `params`
/// list means every parameter of every selected algorithm.
pub fn parameter_stats(
    collection: &DataSetCollection,
    resolved: &Resolved,
    anchors: &AnchorSequence,
    params: &[String],
) -> Result<Vec<ParameterStats>> {
    let mut out = Vec::new();
    for ds in resolved.datasets(collection) {
        let names: Vec<&String> = if params.is_empty() {
            ds.param_names.iter().collect()
        } else {
            params.iter().filter(|p| ds.param_names.contains(p)).collect()
        };
        for name in names {
            let m = align_parameter(ds, anchors, name)?;
            out.push(ParameterStats {
                alg_id: ds.alg_id.clone(),
                parameter: name.clone(),
                rows: describe(&m),
            });
        }
    }
    if out.is_empty() && !params.is_empty() {
        return Err(Error::NoMatchingData(format!("parameters {}", params.join(", "))));
    }
    Ok(out)
}

/// Per-function anchor values, as read from a `funcId,target` table.
pub type TargetMap = BTreeMap<u32, Vec<f64>>;

/// Parses a CSV table of `funcId,target` rows. A header line is optional,
/// repeated function ids accumulate, and each function's anchors are
/// sorted and de-duplicated.
pub fn parse_targets_csv(text: &str) -> Result<TargetMap> {
    let mut map = TargetMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split([',', ';', '\t']).map(|f| f.trim().trim_matches('"'));
        let (Some(f), Some(t)) = (fields.next(), fields.next()) else {
            return Err(Error::InvalidArgument(format!(
                "line {}: expected funcId,target",
                i + 1
            )));
        };
        let (func, target) = match (f.parse::<u32>(), t.parse::<f64>()) {
            (Ok(func), Ok(target)) if target.is_finite() => (func, target),
            _ if i == 0 && f.parse::<f64>().is_err() => continue,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "line {}: cannot read `{line}` as funcId,target",
                    i + 1
                )))
            }
        };
        map.entry(func).or_default().push(target);
    }
    if map.is_empty() {
        return Err(Error::InvalidArgument("target table is empty".into()));
    }
    for v in map.values_mut() {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    Ok(map)
}

/// Radar targets of a dimension as a single-anchor target map.
pub fn radar_target_map(collection: &DataSetCollection, dimension: u32, algs: &[String]) -> Result<TargetMap> {
    Ok(radar_targets(collection, dimension, algs)?
        .into_iter()
        .map(|(f, t)| (f, vec![t]))
        .collect())
}

fn map_anchors(values: &[f64], perspective: Perspective) -> Result<AnchorSequence> {
    Ok(AnchorSequence::from_unsorted(values.to_vec(), perspective)?)
}

/// ECDF of every selected algorithm on one problem, aggregated over the
/// anchors. All curves share the grid, which defaults to the sorted union
/// of observed cells.
pub fn ecdf_single_function(
    collection: &DataSetCollection,
    resolved: &Resolved,
    anchors: &AnchorSequence,
    grid: Option<Vec<f64>>,
) -> Result<Vec<EcdfCurve<f64, f64>>> {
    let matrices = aligned_matrices(collection, resolved, anchors)?;
    let grid = grid.unwrap_or_else(|| default_grid(&matrices));
    if grid.is_empty() {
        return Err(Error::NoMatchingData("no run reaches any anchor".into()));
    }
    matrices.iter().map(|m| Ok(ecdf_targets(m, &grid)?)).collect()
}

/// ECDF of every algorithm aggregated over the functions of a target map
/// in one dimension. Functions an algorithm has no data for are skipped
/// for that algorithm.
pub fn ecdf_multi_function(
    collection: &DataSetCollection,
    dimension: u32,
    algs: &[String],
    targets: &TargetMap,
    perspective: Perspective,
    grid: Option<Vec<f64>>,
) -> Result<Vec<EcdfCurve<f64, f64>>> {
    let mut per_alg: Vec<Vec<AlignedMatrix>> = Vec::with_capacity(algs.len());
    for alg in algs {
        let mut ms = Vec::new();
        for (&f, values) in targets {
            if let Some(ds) = collection.get(alg, f, dimension) {
                ms.push(align(ds, &map_anchors(values, perspective)?)?);
            }
        }
        if !ms.is_empty() {
            per_alg.push(ms);
        }
    }
    if per_alg.is_empty() {
        return Err(Error::NoMatchingData(format!(
            "target map functions in dimension {dimension}"
        )));
    }
    let grid = grid.unwrap_or_else(|| default_grid(per_alg.iter().flatten()));
    if grid.is_empty() {
        return Err(Error::NoMatchingData("no run reaches any anchor".into()));
    }
    per_alg.iter().map(|ms| Ok(ecdf_functions(ms, &grid)?)).collect()
}

/// Area under each fixed-target ECDF over `[t_min, t_max]`.
pub fn auc(curves: &[EcdfCurve<f64, f64>], t_min: f64, t_max: f64) -> Result<Vec<(String, f64)>> {
    curves
        .iter()
        .map(|c| {
            if c.meta.perspective != Perspective::FixedTarget {
                return Err(Error::InvalidArgument("AUC needs fixed-target curves".into()));
            }
            Ok((c.meta.alg_id.clone().unwrap_or_default(), ecdf_auc(c, t_min, t_max)?))
        })
        .collect()
}

/// Largest budget over the data sets of a dimension.
pub fn max_budget(collection: &DataSetCollection, dimension: u32, algs: &[String]) -> u64 {
    collection
        .select_dimension(dimension, algs)
        .iter()
        .map(|d| d.max_budget())
        .max()
        .unwrap_or(0)
}

/// Samples compared by the pairwise test: hitting times of one target, or
/// the defined best values at one budget.
pub fn test_samples(
    collection: &DataSetCollection,
    resolved: &Resolved,
    perspective: Perspective,
    anchor: f64,
) -> Result<(Vec<ComparisonSample<f64>>, Preference)> {
    let anchors = AnchorSequence::new(vec![anchor], Scale::Linear, perspective)?;
    let datasets = resolved.datasets(collection);
    let mut out = Vec::with_capacity(datasets.len());
    for ds in &datasets {
        let m = align(ds, &anchors)?;
        let values = m.defined_column(0);
        if values.is_empty() {
            return Err(Error::NoMatchingData(format!(
                "{} has no value at budget {anchor}",
                ds.alg_id
            )));
        }
        out.push(ComparisonSample {
            alg_id: ds.alg_id.clone(),
            budgets: match perspective {
                Perspective::FixedTarget => m.budgets_f64(),
                Perspective::FixedBudget => Vec::new(),
            },
            values,
        });
    }
    let preference = match perspective {
        Perspective::FixedTarget => Preference::LowerIsBetter,
        Perspective::FixedBudget => match datasets.first().map(|d| d.direction) {
            Some(Direction::Minimize) => Preference::LowerIsBetter,
            _ => Preference::HigherIsBetter,
        },
    };
    Ok((out, preference))
}

pub fn pairwise_test(
    collection: &DataSetCollection,
    resolved: &Resolved,
    perspective: Perspective,
    anchor: f64,
    alpha: f64,
) -> Result<PairwiseKs<f64>> {
    let (samples, preference) = test_samples(collection, resolved, perspective, anchor)?;
    Ok(pairwise_ks(&samples, alpha, preference)?)
}

/// Per-function problems for the Glicko-2 ranking. Fixed-target samples
/// are hitting times of the first anchor of each function; fixed-budget
/// samples are best values, negated when maximizing so that lower is
/// always better.
pub fn rank_problems(
    collection: &DataSetCollection,
    dimension: u32,
    algs: &[String],
    anchors: &TargetMap,
    perspective: Perspective,
) -> Result<Vec<RankProblem>> {
    let mut problems = Vec::new();
    for (&f, values) in anchors {
        let Some(&anchor) = values.first() else { continue };
        let seq = AnchorSequence::new(vec![anchor], Scale::Linear, perspective)?;
        let mut samples = Vec::with_capacity(algs.len());
        for alg in algs {
            let sample = match collection.get(alg, f, dimension) {
                Some(ds) => {
                    let m = align(ds, &seq)?;
                    let sign = match (perspective, ds.direction) {
                        (Perspective::FixedBudget, Direction::Maximize) => -1.0,
                        _ => 1.0,
                    };
                    Some(m.defined_column(0).into_iter().map(|v| sign * v).collect())
                }
                None => None,
            };
            samples.push(sample);
        }
        problems.push(RankProblem {
            label: format!("F{f}/D{dimension}"),
            samples,
        });
    }
    if problems.is_empty() {
        return Err(Error::NoMatchingData(format!("dimension {dimension}")));
    }
    Ok(problems)
}

pub fn rank(algs: &[String], problems: &[RankProblem], rounds: usize, seed: u64) -> Result<Vec<RankEntry<f64>>> {
    Ok(glicko2_rank(
        algs,
        problems,
        Preference::LowerIsBetter,
        rounds,
        seed,
        DEFAULT_TAU,
    )?)
}

/// Default per-function budgets for fixed-budget ranking: the smallest
/// maximal budget among the algorithms with data on each function.
pub fn common_budget_map(collection: &DataSetCollection, dimension: u32, algs: &[String]) -> TargetMap {
    let mut map: BTreeMap<u32, u64> = BTreeMap::new();
    for ds in collection.select_dimension(dimension, algs) {
        let b = ds.max_budget();
        map.entry(ds.func_id).and_modify(|m| *m = (*m).min(b)).or_insert(b);
    }
    map.into_iter().map(|(f, b)| (f, vec![b as f64])).collect()
}

/// Histogram and kernel density of one algorithm's sample at one anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDistribution {
    pub alg_id: String,
    pub sample: Vec<f64>,
    pub bins: Option<Bins<f64>>,
    pub counts: Vec<usize>,
    pub density: Option<DensityEstimate<f64>>,
}

const DENSITY_POINTS: usize = 128;

/// Distribution of the finite values at a single anchor for every
/// selected algorithm. Algorithms with too few finite values get no
/// density estimate.
pub fn distribution(
    collection: &DataSetCollection,
    resolved: &Resolved,
    perspective: Perspective,
    anchor: f64,
) -> Result<Vec<SampleDistribution>> {
    let anchors = AnchorSequence::new(vec![anchor], Scale::Linear, perspective)?;
    resolved
        .datasets(collection)
        .into_iter()
        .map(|ds| {
            let m = align(ds, &anchors)?;
            let sample: Vec<f64> = m.defined_column(0).into_iter().filter(|v| v.is_finite()).collect();
            let bins = fd_bins(&sample).ok();
            let counts = bins.as_ref().map(|b| histogram(&sample, b)).unwrap_or_default();
            Ok(SampleDistribution {
                alg_id: ds.alg_id.clone(),
                density: kde_auto(&sample, DENSITY_POINTS).ok(),
                bins,
                counts,
                sample,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Record, TraceRun};

    fn ds(alg: &str, func: u32, finals: &[(u64, f64)]) -> DataSet {
        DataSet {
            alg_id: alg.into(),
            func_id: func,
            dimension: 2,
            suite: None,
            direction: Direction::Maximize,
            param_names: vec![],
            runs: finals
                .iter()
                .map(|&(e, v)| TraceRun {
                    instance_id: None,
                    param_names: vec![],
                    records: vec![
                        Record {
                            evals: 1,
                            best_so_far: 0.0,
                            current: None,
                            params: vec![],
                        },
                        Record {
                            evals: e,
                            best_so_far: v,
                            current: None,
                            params: vec![],
                        },
                    ],
                })
                .collect(),
        }
    }

    fn collection() -> DataSetCollection {
        DataSetCollection::new(vec![
            ds("A", 1, &[(10, 5.0), (20, 5.0)]),
            ds("B", 1, &[(30, 5.0), (40, 4.0)]),
            ds("A", 2, &[(10, 1.0)]),
        ])
    }

    #[test]
    fn resolve_defaults() {
        let c = collection();
        let r = resolve(&c, &Selection::default()).unwrap();
        assert_eq!((r.func_id, r.dimension), (1, 2));
        assert_eq!(r.algorithms, ["A", "B"]);
        let r = resolve(
            &c,
            &Selection {
                func_id: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.algorithms, ["A"]);
        assert!(resolve(
            &c,
            &Selection {
                dimension: Some(9),
                ..Default::default()
            }
        )
        .is_err());
        let unknown = Selection {
            algorithms: vec!["Z".into()],
            ..Default::default()
        };
        assert!(resolve(&c, &unknown).is_err());
    }

    #[test]
    fn anchors_from_spec() {
        let c = collection();
        let r = resolve(&c, &Selection::default()).unwrap();
        let d = r.datasets(&c);
        let spec = RangeSpec {
            min: Some(4.0),
            max: Some(16.0),
            step: Some(1.33),
            scale: ScaleChoice::Linear,
            ..Default::default()
        };
        let a = resolve_anchors(&d, Perspective::FixedTarget, &spec).unwrap();
        assert_eq!(a.len(), 11);
        let both = RangeSpec {
            step: Some(1.0),
            count: Some(3),
            ..spec
        };
        assert!(resolve_anchors(&d, Perspective::FixedTarget, &both).is_err());
        let single = RangeSpec {
            min: Some(5.0),
            max: Some(5.0),
            ..Default::default()
        };
        assert_eq!(
            resolve_anchors(&d, Perspective::FixedTarget, &single).unwrap().values(),
            [5.0]
        );
    }

    #[test]
    fn targets_csv() {
        let m = parse_targets_csv("funcId,target\n1,5\n2,1\n1,3\n1,5\n").unwrap();
        assert_eq!(m[&1], [3.0, 5.0]);
        assert_eq!(m[&2], [1.0]);
        assert!(parse_targets_csv("1,x\n").is_err());
        assert!(parse_targets_csv("funcId,target\n").is_err());
    }

    #[test]
    fn multi_function_ecdf_skips_missing() {
        let c = collection();
        let map = parse_targets_csv("1,5\n2,1\n").unwrap();
        let algs = vec!["A".to_string(), "B".to_string()];
        let curves = ecdf_multi_function(&c, 2, &algs, &map, Perspective::FixedTarget, None).unwrap();
        assert_eq!(curves.len(), 2);
        // A: f1 runs hit at 10 and 20, f2 run at 10; B: 30 on f1 only.
        assert_eq!(curves[0].grid, [10.0, 20.0, 30.0]);
        assert_eq!(curves[0].proportion, [(0.5 + 1.0) / 2.0, 1.0, 1.0]);
        assert_eq!(curves[1].proportion, [0.0, 0.0, 0.5]);
    }

    #[test]
    fn rank_problems_layout() {
        let c = collection();
        let algs = vec!["A".to_string(), "B".to_string()];
        let map = radar_target_map(&c, 2, &algs).unwrap();
        let p = rank_problems(&c, 2, &algs, &map, Perspective::FixedTarget).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].samples[1], None);
        let r = rank(&algs, &p, 5, 1).unwrap();
        assert_eq!(r[0].alg_id, "A");
    }

    #[test]
    fn fixed_budget_test_samples() {
        let c = collection();
        let r = resolve(&c, &Selection::default()).unwrap();
        let (s, pref) = test_samples(&c, &r, Perspective::FixedBudget, 25.0).unwrap();
        assert_eq!(pref, Preference::HigherIsBetter);
        assert_eq!(s[0].values, [5.0, 5.0]);
        assert_eq!(s[1].values, [0.0, 0.0]);
    }
}
