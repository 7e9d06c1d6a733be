//! JSON views of analysis results. Infinite numbers serialize as `"Inf"`
//! (or `"-Inf"`), undefined ones as `null`.

use ioha_core::comparison::{Decision, KsResult, PairwiseKs, RankEntry};
use ioha_core::metrics::{EcdfCurve, OverviewRow, SampleSummary, StatRow, QUANTILE_LEVELS};
use ioha_core::pipeline::{AlgorithmStats, ParameterStats, SampleDistribution, TargetMap};
use ioha_core::{AnchorSequence, DataSetCollection};
use serde_json::{json, Map, Value};

pub fn number(x: f64) -> Value {
    if x.is_nan() {
        Value::Null
    } else if x.is_infinite() {
        json!(if x > 0.0 { "Inf" } else { "-Inf" })
    } else {
        json!(x)
    }
}

pub fn optional(x: Option<f64>) -> Value {
    x.map_or(Value::Null, number)
}

pub fn numbers(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| number(x)).collect())
}

/// Quantile level as a column label, e.g. `Q2%`, `Q50%`.
pub fn quantile_label(p: f64) -> String {
    format!("Q{}%", (p * 100.0).round())
}

fn summary(s: &Option<SampleSummary<f64>>) -> Value {
    let Some(s) = s else { return Value::Null };
    let quantiles: Map<String, Value> = QUANTILE_LEVELS
        .iter()
        .zip(s.quantiles)
        .map(|(&p, q)| (quantile_label(p), number(q)))
        .collect();
    json!({
        "n": s.n,
        "mean": number(s.mean),
        "median": number(s.median),
        "sd": optional(s.sd),
        "quantiles": quantiles,
    })
}

/// Fields that do not apply to the row's perspective are omitted.
pub fn stat_row(r: &StatRow<f64>) -> Value {
    let mut row = Map::new();
    row.insert("anchor".into(), number(r.anchor));
    row.insert("runs".into(), json!(r.runs));
    if let Some(n) = r.success_count {
        row.insert("successCount".into(), json!(n));
    }
    if let Some(p) = r.success_rate {
        row.insert("successRate".into(), number(p));
    }
    row.insert("summary".into(), summary(&r.summary));
    if let Some(p) = r.par1 {
        row.insert("par1".into(), number(p));
    }
    if let Some(e) = r.ert {
        row.insert("ert".into(), number(e));
    }
    Value::Object(row)
}

pub fn stats(stats: &[AlgorithmStats]) -> Value {
    Value::Array(
        stats
            .iter()
            .map(|s| json!({"algId": s.alg_id, "rows": s.rows.iter().map(stat_row).collect::<Vec<_>>()}))
            .collect(),
    )
}

pub fn parameter_stats(stats: &[ParameterStats]) -> Value {
    Value::Array(
        stats
            .iter()
            .map(|s| {
                json!({
                    "algId": s.alg_id,
                    "parameter": s.parameter,
                    "rows": s.rows.iter().map(stat_row).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn anchors(a: &AnchorSequence) -> Value {
    json!({
        "values": numbers(a.values()),
        "scale": a.scale(),
        "perspective": a.perspective(),
    })
}

pub fn target_map(map: &TargetMap) -> Value {
    Value::Object(map.iter().map(|(f, v)| (f.to_string(), numbers(v))).collect())
}

pub fn ecdf_curve(c: &EcdfCurve<f64, f64>) -> Value {
    json!({
        "algId": c.meta.alg_id,
        "scope": c.meta.scope,
        "perspective": c.meta.perspective,
        "targetMap": target_map(&c.meta.target_map),
        "x": numbers(&c.grid),
        "y": numbers(&c.proportion),
    })
}

pub fn ecdf_curves(curves: &[EcdfCurve<f64, f64>]) -> Value {
    Value::Array(curves.iter().map(ecdf_curve).collect())
}

fn decision(d: Decision) -> Value {
    json!(d)
}

fn ks_cell(r: &Option<KsResult<f64>>) -> (Value, Value, Value, Value) {
    match r {
        Some(r) => (
            number(r.statistic),
            number(r.p_raw),
            number(r.p_corrected),
            decision(r.decision),
        ),
        None => (Value::Null, Value::Null, Value::Null, Value::Null),
    }
}

/// Matrices indexed `[left][right]`, plus `(winner, loser)` edges by name.
pub fn pairwise(res: &PairwiseKs<f64>) -> Value {
    let mut stat = Vec::new();
    let mut p_raw = Vec::new();
    let mut p_corr = Vec::new();
    let mut decisions = Vec::new();
    for row in &res.results {
        let cells: Vec<_> = row.iter().map(ks_cell).collect();
        stat.push(Value::Array(cells.iter().map(|c| c.0.clone()).collect()));
        p_raw.push(Value::Array(cells.iter().map(|c| c.1.clone()).collect()));
        p_corr.push(Value::Array(cells.iter().map(|c| c.2.clone()).collect()));
        decisions.push(Value::Array(cells.iter().map(|c| c.3.clone()).collect()));
    }
    json!({
        "algorithms": res.algorithms,
        "alpha": number(res.alpha),
        "pairs": res.pairs(),
        "statistic": stat,
        "pRaw": p_raw,
        "pCorrected": p_corr,
        "decision": decisions,
        "edges": res
            .edges
            .iter()
            .map(|&(w, l)| json!({"from": res.algorithms[w], "to": res.algorithms[l]}))
            .collect::<Vec<_>>(),
    })
}

pub fn ranking(entries: &[RankEntry<f64>]) -> Value {
    Value::Array(
        entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                json!({
                    "rank": i + 1,
                    "algId": e.alg_id,
                    "rating": number(e.state.rating),
                    "deviation": number(e.state.deviation),
                    "volatility": number(e.state.volatility),
                    "games": e.games,
                })
            })
            .collect(),
    )
}

pub fn overview(rows: &[OverviewRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "algId": r.alg_id,
                    "funcId": r.func_id,
                    "dimension": r.dimension,
                    "runs": r.runs,
                    "worstRecorded": number(r.worst_recorded),
                    "worstReached": number(r.worst_reached),
                    "bestReached": number(r.best_reached),
                    "meanReached": number(r.mean_reached),
                    "medianReached": number(r.median_reached),
                    "succ": r.succ,
                    "minBudget": r.min_budget,
                    "maxBudget": r.max_budget,
                })
            })
            .collect(),
    )
}

pub fn distributions(ds: &[SampleDistribution]) -> Value {
    Value::Array(
        ds.iter()
            .map(|d| {
                json!({
                    "algId": d.alg_id,
                    "sample": numbers(&d.sample),
                    "histogram": d.bins.as_ref().map(|b| json!({
                        "edges": numbers(&b.edges),
                        "width": number(b.width),
                        "rule": b.rule,
                        "counts": d.counts,
                    })),
                    "density": d.density.as_ref().map(|k| json!({
                        "x": numbers(&k.support),
                        "y": numbers(&k.density),
                        "bandwidth": number(k.bandwidth),
                    })),
                })
            })
            .collect(),
    )
}

pub fn auc(values: &[(String, f64)]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|(a, v)| json!({"algId": a, "auc": number(*v)}))
            .collect(),
    )
}

/// Algorithms, functions and dimensions of a collection, plus one entry
/// per data set.
pub fn collection_summary(c: &DataSetCollection) -> Value {
    json!({
        "algorithms": c.algorithms(),
        "functions": c.functions(),
        "dimensions": c.dimensions(),
        "datasets": c.datasets().iter().map(|d| json!({
            "algId": d.alg_id,
            "funcId": d.func_id,
            "dimension": d.dimension,
            "suite": d.suite,
            "direction": d.direction,
            "runs": d.runs.len(),
            "maxBudget": d.max_budget(),
            "parameters": d.param_names,
        })).collect::<Vec<_>>(),
    })
}
