//! Complete analyses driven by a [`Request`]: each report carries the
//! inputs actually used (defaults filled in), a JSON result and a table.

use ioha_core::comparison::{DEFAULT_ROUNDS, DEFAULT_SEED};
use ioha_core::metrics::data_overview;
use ioha_core::pipeline::{self, RangeSpec, Resolved, Selection, TargetMap};
use ioha_core::{AnchorSequence, DataSet, DataSetCollection, Direction, Error, Perspective, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::json as js;
use crate::table::{Cell, TableDocument};
use crate::tables::{self, Layout};

/// How per-function targets are chosen when no explicit map is given.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetSource {
    /// The data-driven default anchors of each function.
    #[default]
    Default,
    /// One radar target per function.
    Radar,
}

/// Whether an ECDF aggregates over one function or every function of a
/// dimension.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    #[default]
    Function,
    Dimension,
}

/// Everything an analysis can be parameterized with. Fields irrelevant to
/// a report are ignored by it.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub selection: Selection,
    pub perspective: Perspective,
    pub range: RangeSpec,
    /// Explicit anchors; take precedence over `range`.
    pub anchors: Option<Vec<f64>>,
    /// Per-function targets for dimension-wide analyses.
    pub target_map: Option<TargetMap>,
    pub target_source: TargetSource,
    pub scope: Scope,
    /// Single anchor of the pairwise test and the distribution view.
    pub anchor: Option<f64>,
    pub success_target: Option<f64>,
    pub alpha: f64,
    pub rounds: usize,
    pub seed: u64,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub params: Vec<String>,
    pub layout: Layout,
}

impl Default for Request {
    fn default() -> Self {
        Self {
            selection: Selection::default(),
            perspective: Perspective::FixedTarget,
            range: RangeSpec::default(),
            anchors: None,
            target_map: None,
            target_source: TargetSource::Default,
            scope: Scope::Function,
            anchor: None,
            success_target: None,
            alpha: ioha_core::comparison::DEFAULT_ALPHA,
            rounds: DEFAULT_ROUNDS,
            seed: DEFAULT_SEED,
            t_min: None,
            t_max: None,
            params: Vec::new(),
            layout: Layout::Long,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Resolved inputs.
    pub input: Value,
    pub result: Value,
    pub table: TableDocument,
}

impl Report {
    /// `{"input": ..., "result": ...}`.
    pub fn to_json(&self) -> Value {
        json!({"input": self.input, "result": self.result})
    }
}

fn selection_input(r: &Resolved, perspective: Perspective) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("funcId".into(), json!(r.func_id));
    m.insert("dimension".into(), json!(r.dimension));
    m.insert("algorithms".into(), json!(r.algorithms));
    m.insert("perspective".into(), json!(perspective));
    m
}

fn dimension_input(dim: u32, algs: &[String], perspective: Perspective) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("dimension".into(), json!(dim));
    m.insert("algorithms".into(), json!(algs));
    m.insert("perspective".into(), json!(perspective));
    m
}

fn anchors_for(datasets: &[&DataSet], req: &Request) -> Result<AnchorSequence> {
    match &req.anchors {
        Some(v) => Ok(AnchorSequence::from_unsorted(v.clone(), req.perspective)?),
        None => pipeline::resolve_anchors(datasets, req.perspective, &req.range),
    }
}

/// The anchor used when a single one is needed and none is given: the
/// middle default target, or the smallest maximal budget.
fn single_anchor(datasets: &[&DataSet], req: &Request) -> Result<f64> {
    if let Some(a) = req.anchor {
        return Ok(a);
    }
    match req.perspective {
        Perspective::FixedTarget => {
            let v = pipeline::resolve_anchors(datasets, req.perspective, &RangeSpec::default())?;
            Ok(v.values()[v.len() / 2])
        }
        Perspective::FixedBudget => datasets
            .iter()
            .map(|d| d.max_budget())
            .min()
            .map(|b| b as f64)
            .ok_or_else(|| Error::NoMatchingData("empty selection".into())),
    }
}

/// Default anchors of every function in a dimension.
fn default_map(c: &DataSetCollection, dim: u32, algs: &[String], req: &Request) -> Result<TargetMap> {
    let mut map = TargetMap::new();
    let mut funcs: Vec<u32> = c.select_dimension(dim, algs).iter().map(|d| d.func_id).collect();
    funcs.sort_unstable();
    funcs.dedup();
    for f in funcs {
        let ds = c.select(f, dim, algs);
        let a = pipeline::resolve_anchors(&ds, req.perspective, &req.range)?;
        map.insert(f, a.values().to_vec());
    }
    Ok(map)
}

fn target_map_for(c: &DataSetCollection, dim: u32, algs: &[String], req: &Request) -> Result<TargetMap> {
    if let Some(m) = &req.target_map {
        return Ok(m.clone());
    }
    match (req.target_source, req.perspective) {
        (TargetSource::Radar, Perspective::FixedTarget) => pipeline::radar_target_map(c, dim, algs),
        (TargetSource::Radar, Perspective::FixedBudget) => Ok(pipeline::common_budget_map(c, dim, algs)),
        (TargetSource::Default, _) => default_map(c, dim, algs, req),
    }
}

/// Loaded data sets.
pub fn summary(c: &DataSetCollection) -> Report {
    Report {
        input: json!({}),
        result: js::collection_summary(c),
        table: tables::summary_table(c),
    }
}

pub fn overview(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let r = pipeline::resolve(c, &req.selection)?;
    let rows = data_overview(c, r.func_id, r.dimension, &r.algorithms)?;
    Ok(Report {
        input: selection_input(&r, req.perspective).into(),
        result: js::overview(&rows),
        table: tables::overview_table(&rows),
    })
}

pub fn stats(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let r = pipeline::resolve(c, &req.selection)?;
    let anchors = anchors_for(&r.datasets(c), req)?;
    let stats = pipeline::stats(c, &r, &anchors, req.success_target)?;
    let mut input = selection_input(&r, req.perspective);
    input.insert("anchors".into(), js::anchors(&anchors));
    input.insert("successTarget".into(), js::optional(req.success_target));
    Ok(Report {
        input: input.into(),
        result: js::stats(&stats),
        table: tables::stats_table(&stats, req.perspective),
    })
}

/// Raw aligned samples.
pub fn samples(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let r = pipeline::resolve(c, &req.selection)?;
    let anchors = anchors_for(&r.datasets(c), req)?;
    let matrices = pipeline::aligned_matrices(c, &r, &anchors)?;
    let mut input = selection_input(&r, req.perspective);
    input.insert("anchors".into(), js::anchors(&anchors));
    input.insert(
        "layout".into(),
        json!(match req.layout {
            Layout::Long => "long",
            Layout::Wide => "wide",
        }),
    );
    let result = matrices
        .iter()
        .map(|m| {
            json!({
                "algId": m.alg_id,
                "budgets": m.budgets,
                "values": m.cells.iter().map(|row| row.iter().map(|&v| js::optional(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Report {
        input: input.into(),
        result: Value::Array(result),
        table: tables::samples_table(&matrices, req.layout, true),
    })
}

pub fn params(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let r = pipeline::resolve(c, &req.selection)?;
    let anchors = anchors_for(&r.datasets(c), req)?;
    let stats = pipeline::parameter_stats(c, &r, &anchors, &req.params)?;
    let mut input = selection_input(&r, req.perspective);
    input.insert("anchors".into(), js::anchors(&anchors));
    input.insert("parameters".into(), json!(req.params));
    Ok(Report {
        input: input.into(),
        result: js::parameter_stats(&stats),
        table: tables::parameter_table(&stats, req.perspective),
    })
}

fn wants_multi(req: &Request) -> bool {
    req.scope == Scope::Dimension || req.target_map.is_some()
}

fn ecdf_curves(
    c: &DataSetCollection,
    req: &Request,
) -> Result<(serde_json::Map<String, Value>, Vec<ioha_core::EcdfCurve>)> {
    if wants_multi(req) {
        let (dim, algs) = pipeline::resolve_dimension_wide(c, &req.selection)?;
        let map = target_map_for(c, dim, &algs, req)?;
        let curves = pipeline::ecdf_multi_function(c, dim, &algs, &map, req.perspective, None)?;
        let mut input = dimension_input(dim, &algs, req.perspective);
        input.insert("scope".into(), json!(Scope::Dimension));
        input.insert("targetMap".into(), js::target_map(&map));
        Ok((input, curves))
    } else {
        let r = pipeline::resolve(c, &req.selection)?;
        let anchors = anchors_for(&r.datasets(c), req)?;
        let curves = pipeline::ecdf_single_function(c, &r, &anchors, None)?;
        let mut input = selection_input(&r, req.perspective);
        input.insert("scope".into(), json!(Scope::Function));
        input.insert("anchors".into(), js::anchors(&anchors));
        Ok((input, curves))
    }
}

pub fn ecdf(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let (input, curves) = ecdf_curves(c, req)?;
    Ok(Report {
        input: input.into(),
        result: js::ecdf_curves(&curves),
        table: tables::ecdf_table(&curves),
    })
}

/// Area under the fixed-target ECDF; the budget range defaults to
/// `[1, largest budget]`.
pub fn auc(c: &DataSetCollection, req: &Request) -> Result<Report> {
    if req.perspective != Perspective::FixedTarget {
        return Err(Error::InvalidArgument(
            "AUC is defined for the fixed-target perspective".into(),
        ));
    }
    let (mut input, curves) = ecdf_curves(c, req)?;
    let algs: Vec<String> = curves.iter().filter_map(|c| c.meta.alg_id.clone()).collect();
    let dim = input["dimension"].as_u64().unwrap_or_default() as u32;
    let t_min = req.t_min.unwrap_or(1.0);
    let t_max = req.t_max.unwrap_or_else(|| pipeline::max_budget(c, dim, &algs) as f64);
    let values = pipeline::auc(&curves, t_min, t_max)?;
    input.insert("tMin".into(), js::number(t_min));
    input.insert("tMax".into(), js::number(t_max));
    Ok(Report {
        input: input.into(),
        result: js::auc(&values),
        table: tables::auc_table(&values, t_min, t_max),
    })
}

/// Pairwise KS tests with Bonferroni correction.
pub fn test(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let r = pipeline::resolve(c, &req.selection)?;
    let anchor = single_anchor(&r.datasets(c), req)?;
    let res = pipeline::pairwise_test(c, &r, req.perspective, anchor, req.alpha)?;
    let mut input = selection_input(&r, req.perspective);
    input.insert("anchor".into(), js::number(anchor));
    input.insert("alpha".into(), js::number(req.alpha));
    Ok(Report {
        input: input.into(),
        result: js::pairwise(&res),
        table: tables::ks_table(&res),
    })
}

/// Glicko-2 ranking over the functions of a dimension.
pub fn rank(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let (dim, algs) = pipeline::resolve_dimension_wide(c, &req.selection)?;
    let map = match (&req.target_map, req.perspective, req.target_source) {
        (Some(m), _, _) => m.clone(),
        (None, Perspective::FixedTarget, _) => pipeline::radar_target_map(c, dim, &algs)?,
        (None, Perspective::FixedBudget, _) => pipeline::common_budget_map(c, dim, &algs),
    };
    let problems = pipeline::rank_problems(c, dim, &algs, &map, req.perspective)?;
    let entries = pipeline::rank(&algs, &problems, req.rounds, req.seed)?;
    let mut input = dimension_input(dim, &algs, req.perspective);
    input.insert("targetMap".into(), js::target_map(&map));
    input.insert("rounds".into(), json!(req.rounds));
    input.insert("seed".into(), json!(req.seed));
    Ok(Report {
        input: input.into(),
        result: js::ranking(&entries),
        table: tables::rank_table(&entries),
    })
}

/// Per-function performance at the radar targets (fixed-target: ERT) or
/// at the common budget (fixed-budget: mean best value), with the rank of
/// every algorithm on each function. Equal values share the better rank.
pub fn radar(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let (dim, algs) = pipeline::resolve_dimension_wide(c, &req.selection)?;
    let map = match req.perspective {
        Perspective::FixedTarget => pipeline::radar_target_map(c, dim, &algs)?,
        Perspective::FixedBudget => pipeline::common_budget_map(c, dim, &algs),
    };
    let measure = match req.perspective {
        Perspective::FixedTarget => "ERT",
        Perspective::FixedBudget => "mean",
    };
    let mut table = TableDocument::new(
        "Per-function performance",
        ["funcId", "anchor", "algId", measure, "rank"],
    );
    let mut functions = Vec::new();
    for (&f, anchors) in &map {
        let anchor = anchors[0];
        let r = pipeline::resolve(
            c,
            &Selection {
                func_id: Some(f),
                dimension: Some(dim),
                algorithms: algs.clone(),
            },
        )?;
        let seq = AnchorSequence::new(vec![anchor], ioha_core::Scale::Linear, req.perspective)?;
        let stats = pipeline::stats(c, &r, &seq, None)?;
        let maximize = r.datasets(c).first().map(|d| d.direction) == Some(Direction::Maximize);
        // Lower key is better.
        let scored: Vec<(String, f64, f64)> = stats
            .iter()
            .map(|s| {
                let row = &s.rows[0];
                let value = match req.perspective {
                    Perspective::FixedTarget => row.ert.unwrap_or(f64::INFINITY),
                    Perspective::FixedBudget => row.summary.as_ref().map_or(f64::NAN, |x| x.mean),
                };
                let key = match (req.perspective, maximize) {
                    (Perspective::FixedBudget, true) => -value,
                    _ => value,
                };
                (s.alg_id.clone(), value, if key.is_nan() { f64::INFINITY } else { key })
            })
            .collect();
        let mut entries = Vec::new();
        for (alg, value, key) in &scored {
            let rank = 1 + scored.iter().filter(|o| o.2 < *key).count();
            table.push(vec![
                f.into(),
                anchor.into(),
                alg.as_str().into(),
                (*value).into(),
                rank.into(),
            ]);
            entries.push(json!({"algId": alg, "value": js::number(*value), "rank": rank}));
        }
        functions.push(json!({"funcId": f, "anchor": js::number(anchor), "algorithms": entries}));
    }
    let mut input = dimension_input(dim, &algs, req.perspective);
    input.insert("targetMap".into(), js::target_map(&map));
    Ok(Report {
        input: input.into(),
        result: json!({"measure": measure, "functions": functions}),
        table,
    })
}

/// Histogram and kernel density of the sample at one anchor.
pub fn density(c: &DataSetCollection, req: &Request) -> Result<Report> {
    let r = pipeline::resolve(c, &req.selection)?;
    let anchor = single_anchor(&r.datasets(c), req)?;
    let dists = pipeline::distribution(c, &r, req.perspective, anchor)?;
    let mut input = selection_input(&r, req.perspective);
    input.insert("anchor".into(), js::number(anchor));
    let mut table = TableDocument::new("Histogram", ["algId", "binStart", "binEnd", "count"]);
    for d in &dists {
        if let Some(b) = &d.bins {
            for (k, &n) in d.counts.iter().enumerate() {
                table.push(vec![
                    d.alg_id.as_str().into(),
                    b.edges[k].into(),
                    b.edges[k + 1].into(),
                    Cell::from(n),
                ]);
            }
        }
    }
    Ok(Report {
        input: input.into(),
        result: js::distributions(&dists),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ioha_core::{Record, TraceRun};

    fn ds(alg: &str, func: u32, hits: &[u64]) -> DataSet {
        DataSet {
            alg_id: alg.into(),
            func_id: func,
            dimension: 5,
            suite: None,
            direction: Direction::Maximize,
            param_names: vec![],
            runs: hits
                .iter()
                .map(|&h| TraceRun {
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
                            evals: h,
                            best_so_far: 1.0,
                            current: None,
                            params: vec![],
                        },
                        Record {
                            evals: 100,
                            best_so_far: 1.0,
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
            ds("A", 1, &[2, 3, 4]),
            ds("B", 1, &[20, 30, 40]),
            ds("A", 2, &[5]),
        ])
    }

    #[test]
    fn echo_fills_defaults() {
        let rep = stats(&collection(), &Request::default()).unwrap();
        assert_eq!(rep.input["funcId"], 1);
        assert_eq!(rep.input["dimension"], 5);
        assert_eq!(rep.input["algorithms"], json!(["A", "B"]));
        assert_eq!(rep.input["perspective"], "target");
    }

    #[test]
    fn radar_ranks_by_ert() {
        let rep = radar(&collection(), &Request::default()).unwrap();
        let f1 = &rep.result["functions"][0]["algorithms"];
        assert_eq!(f1[0]["rank"], 1);
        assert_eq!(f1[1]["rank"], 2);
    }

    #[test]
    fn auc_rejects_budget_perspective() {
        let req = Request {
            perspective: Perspective::FixedBudget,
            ..Default::default()
        };
        assert!(matches!(auc(&collection(), &req), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn rank_is_seeded() {
        let a = rank(&collection(), &Request::default()).unwrap();
        let b = rank(&collection(), &Request::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.result[0]["algId"], "A");
    }
}
