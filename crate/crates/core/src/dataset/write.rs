use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{DataSet, DataSetCollection, TraceRun, BEST_SO_FAR, CURRENT_VALUE, FUNCTION_EVALUATION};

fn quote(value: &str) -> String {
    if value.contains('\'') {
        format!("\"{value}\"")
    } else {
        format!("'{value}'")
    }
}

/// Renders the meta-data block of one data set whose raw file lives at
/// `data_path` (relative to the `.info` file).
pub fn write_info_block(ds: &DataSet, data_path: &str) -> String {
    let mut out = String::new();
    if let Some(suite) = &ds.suite {
        let _ = write!(out, "suite = {}, ", quote(suite));
    }
    let _ = writeln!(
        out,
        "funcId = {}, DIM = {}, algId = {}",
        ds.func_id,
        ds.dimension,
        quote(&ds.alg_id)
    );
    out.push_str("%\n");
    out.push_str(data_path);
    for (i, run) in ds.runs.iter().enumerate() {
        let id = run.instance_id.unwrap_or(i as i64 + 1);
        let best = run.final_value().unwrap_or(f64::NAN);
        let _ = write!(out, ", {id}:{}|{best:e}", run.budget());
    }
    out.push('\n');
    out
}

/// Renders runs in the raw-data layout, one separator line per run.
/// Floats are written in the shortest form that parses back exactly.
pub fn write_raw(runs: &[TraceRun]) -> String {
    let mut out = String::new();
    for run in runs {
        let has_current = run.has_current();
        let _ = write!(out, "\"{FUNCTION_EVALUATION}\"");
        if has_current {
            let _ = write!(out, " \"{CURRENT_VALUE}\"");
        }
        let _ = write!(out, " \"{BEST_SO_FAR}\"");
        for name in &run.param_names {
            let _ = write!(out, " \"{name}\"");
        }
        out.push('\n');
        for rec in &run.records {
            let _ = write!(out, "{}", rec.evals);
            if has_current {
                let _ = write!(out, " {:e}", rec.current.unwrap_or(f64::NAN));
            }
            let _ = write!(out, " {:e}", rec.best_so_far);
            for p in &rec.params {
                let _ = write!(out, " {p:e}");
            }
            out.push('\n');
        }
    }
    out
}

fn dir_name(alg_id: &str) -> String {
    alg_id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Writes the collection under `dir` in the IOHprofiler layout, one
/// sub-directory per algorithm.
pub fn write_experiment(collection: &DataSetCollection, dir: &Path) -> std::io::Result<()> {
    let mut infos: BTreeMap<(String, u32), String> = BTreeMap::new();
    for ds in collection.datasets() {
        let alg_dir = dir.join(dir_name(&ds.alg_id));
        let data_path = format!(
            "data_f{f}/IOHprofiler_f{f}_DIM{d}.dat",
            f = ds.func_id,
            d = ds.dimension
        );
        let raw_file = alg_dir.join(&data_path);
        fs::create_dir_all(raw_file.parent().expect("data file has a parent"))?;
        fs::write(&raw_file, write_raw(&ds.runs))?;
        infos
            .entry((dir_name(&ds.alg_id), ds.func_id))
            .or_default()
            .push_str(&write_info_block(ds, &data_path));
    }
    for ((alg, func), text) in infos {
        fs::write(dir.join(alg).join(format!("IOHprofiler_f{func}.info")), text)?;
    }
    Ok(())
}
