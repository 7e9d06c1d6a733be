use ioha_core::comparison::{Decision, PairwiseKs, RankEntry};
use ioha_core::metrics::{EcdfCurve, OverviewRow, StatRow, QUANTILE_LEVELS};
use ioha_core::pipeline::{AlgorithmStats, ParameterStats};
use ioha_core::{AlignedMatrix, DataSetCollection, Direction, Perspective};

use crate::json::quantile_label;
use crate::table::{Cell, TableDocument};

/// Sample layout of [`export_samples`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One row per (anchor, run).
    Long,
    /// One row per anchor, one column per run.
    Wide,
}

fn anchor_name(p: Perspective) -> &'static str {
    match p {
        Perspective::FixedTarget => "target",
        Perspective::FixedBudget => "budget",
    }
}

fn quantile_headers() -> impl Iterator<Item = String> {
    QUANTILE_LEVELS.iter().map(|&p| quantile_label(p))
}

fn summary_cells(row: &StatRow<f64>) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(12);
    match &row.summary {
        Some(s) => {
            cells.push(s.mean.into());
            cells.push(s.median.into());
            cells.push(s.sd.into());
            cells.extend(s.quantiles.iter().map(|&q| Cell::Num(q)));
        }
        None => cells.extend(std::iter::repeat_n(Cell::Missing, 3 + QUANTILE_LEVELS.len())),
    }
    cells
}

/// Summary of a collection: one row per data set.
pub fn summary_table(c: &DataSetCollection) -> TableDocument {
    let mut t = TableDocument::new(
        "Data sets",
        [
            "algId",
            "funcId",
            "DIM",
            "suite",
            "direction",
            "runs",
            "maxBudget",
            "parameters",
        ],
    );
    for d in c.datasets() {
        let direction = match d.direction {
            Direction::Maximize => "maximize",
            Direction::Minimize => "minimize",
        };
        t.push(vec![
            d.alg_id.as_str().into(),
            d.func_id.into(),
            d.dimension.into(),
            d.suite.clone().map_or(Cell::Missing, Cell::Text),
            direction.into(),
            d.runs.len().into(),
            d.max_budget().into(),
            d.param_names.join(";").into(),
        ]);
    }
    t
}

pub fn overview_table(rows: &[OverviewRow]) -> TableDocument {
    let mut t = TableDocument::new(
        "Data overview",
        [
            "algId",
            "funcId",
            "DIM",
            "runs",
            "worst recorded",
            "worst reached",
            "best reached",
            "mean reached",
            "median reached",
            "succ",
            "min budget",
            "max budget",
        ],
    );
    for r in rows {
        t.push(vec![
            r.alg_id.as_str().into(),
            r.func_id.into(),
            r.dimension.into(),
            r.runs.into(),
            r.worst_recorded.into(),
            r.worst_reached.into(),
            r.best_reached.into(),
            r.mean_reached.into(),
            r.median_reached.into(),
            r.succ.into(),
            r.min_budget.into(),
            r.max_budget.into(),
        ]);
    }
    t
}

/// Fixed-target tables have columns `algId, target, mean, median, sd,
/// Q2%..Q98%, ERT, runs, succ`. Fixed-budget tables have `budget` in place
/// of `target`, no ERT, and `succ` only when a success target was given.
pub fn stats_table(stats: &[AlgorithmStats], perspective: Perspective) -> TableDocument {
    let with_succ = perspective == Perspective::FixedTarget
        || stats.iter().flat_map(|s| &s.rows).any(|r| r.success_count.is_some());
    let mut header = vec!["algId".to_string(), anchor_name(perspective).to_string()];
    header.extend(["mean", "median", "sd"].map(String::from));
    header.extend(quantile_headers());
    if perspective == Perspective::FixedTarget {
        header.push("ERT".into());
    }
    header.push("runs".into());
    if with_succ {
        header.push("succ".into());
    }
    let caption = match perspective {
        Perspective::FixedTarget => "Runtime statistics",
        Perspective::FixedBudget => "Function value statistics",
    };
    let mut t = TableDocument::new(caption, header);
    for s in stats {
        for row in &s.rows {
            let mut cells = vec![s.alg_id.as_str().into(), row.anchor.into()];
            cells.extend(summary_cells(row));
            if perspective == Perspective::FixedTarget {
                cells.push(row.ert.into());
            }
            cells.push(row.runs.into());
            if with_succ {
                cells.push(row.success_count.map_or(Cell::Missing, Cell::from));
            }
            t.push(cells);
        }
    }
    t
}

/// Parameter statistics: `algId, parameter, anchor, runs, mean, median, sd,
/// Q2%..Q98%`.
pub fn parameter_table(stats: &[ParameterStats], perspective: Perspective) -> TableDocument {
    let mut header: Vec<String> = [
        "algId",
        "parameter",
        anchor_name(perspective),
        "runs",
        "mean",
        "median",
        "sd",
    ]
    .map(String::from)
    .to_vec();
    header.extend(quantile_headers());
    let mut t = TableDocument::new("Parameter statistics", header);
    for s in stats {
        for row in &s.rows {
            let mut cells = vec![
                s.alg_id.as_str().into(),
                s.parameter.as_str().into(),
                row.anchor.into(),
                row.runs.into(),
            ];
            cells.extend(summary_cells(row));
            t.push(cells);
        }
    }
    t
}

/// Samples of one aligned matrix: `anchor, run, value` rows (long) or
/// `anchor, run 1, run 2, ...` rows (wide). Runs are numbered from 1.
pub fn export_samples(m: &AlignedMatrix, layout: Layout) -> TableDocument {
    samples_table(std::slice::from_ref(m), layout, false)
}

/// Samples of several matrices in one table, optionally prefixed with the
/// algorithm id.
pub fn samples_table(matrices: &[AlignedMatrix], layout: Layout, with_alg: bool) -> TableDocument {
    let perspective = matrices.first().map_or(Perspective::FixedTarget, |m| m.perspective());
    let mut header: Vec<String> = Vec::new();
    if with_alg {
        header.push("algId".into());
    }
    header.push(anchor_name(perspective).into());
    let width = matrices.iter().map(AlignedMatrix::runs).max().unwrap_or(0);
    match layout {
        Layout::Long => header.extend(["run", "value"].map(String::from)),
        Layout::Wide => header.extend((1..=width).map(|i| format!("run {i}"))),
    }
    let caption = match perspective {
        Perspective::FixedTarget => "Runtime samples",
        Perspective::FixedBudget => "Function value samples",
    };
    let mut t = TableDocument::new(caption, header);
    for m in matrices {
        for (j, &anchor) in m.anchors.values().iter().enumerate() {
            let prefix = || {
                let mut cells: Vec<Cell> = Vec::new();
                if with_alg {
                    cells.push(m.alg_id.as_str().into());
                }
                cells.push(anchor.into());
                cells
            };
            match layout {
                Layout::Long => {
                    for (i, row) in m.cells.iter().enumerate() {
                        let mut cells = prefix();
                        cells.push((i + 1).into());
                        cells.push(row[j].into());
                        t.push(cells);
                    }
                }
                Layout::Wide => {
                    let mut cells = prefix();
                    cells.extend(m.cells.iter().map(|row| Cell::from(row[j])));
                    cells.resize(t.header.len(), Cell::Missing);
                    t.push(cells);
                }
            }
        }
    }
    t
}

pub fn ecdf_table(curves: &[EcdfCurve<f64, f64>]) -> TableDocument {
    let mut t = TableDocument::new("Empirical cumulative distribution", ["algId", "x", "proportion"]);
    for c in curves {
        let alg = c.meta.alg_id.clone().unwrap_or_default();
        for (&x, &y) in c.grid.iter().zip(&c.proportion) {
            t.push(vec![alg.as_str().into(), x.into(), y.into()]);
        }
    }
    t
}

pub fn auc_table(values: &[(String, f64)], t_min: f64, t_max: f64) -> TableDocument {
    let mut t = TableDocument::new("Area under the ECDF", ["algId", "tMin", "tMax", "AUC"]);
    for (alg, v) in values {
        t.push(vec![alg.as_str().into(), t_min.into(), t_max.into(), (*v).into()]);
    }
    t
}

/// One row per unordered pair; `better` names the dominating algorithm
/// when the corrected p-value is significant.
pub fn ks_table(res: &PairwiseKs<f64>) -> TableDocument {
    let mut t = TableDocument::new(
        format!(
            "Pairwise Kolmogorov-Smirnov tests (alpha = {})",
            crate::format_number(res.alpha)
        ),
        ["algA", "algB", "D", "p", "p (Bonferroni)", "better"],
    );
    let k = res.algorithms.len();
    for i in 0..k {
        for j in i + 1..k {
            let Some(r) = &res.results[i][j] else { continue };
            let better = match r.decision {
                Decision::LeftDominates => res.algorithms[i].as_str().into(),
                Decision::RightDominates => res.algorithms[j].as_str().into(),
                Decision::NoDecision => Cell::Missing,
            };
            t.push(vec![
                res.algorithms[i].as_str().into(),
                res.algorithms[j].as_str().into(),
                r.statistic.into(),
                r.p_raw.into(),
                r.p_corrected.into(),
                better,
            ]);
        }
    }
    t
}

pub fn rank_table(entries: &[RankEntry<f64>]) -> TableDocument {
    let mut t = TableDocument::new(
        "Glicko-2 ranking",
        ["rank", "algId", "rating", "deviation", "volatility", "games"],
    );
    for (i, e) in entries.iter().enumerate() {
        t.push(vec![
            (i + 1).into(),
            e.alg_id.as_str().into(),
            e.state.rating.into(),
            e.state.deviation.into(),
            e.state.volatility.into(),
            e.games.into(),
        ]);
    }
    t
}
