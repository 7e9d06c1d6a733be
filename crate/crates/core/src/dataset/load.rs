use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;

use super::archive;
use super::{detect_direction, parse_info, parse_raw, DataSet, DataSetCollection, LoadError, MetaEntry, TraceRun};

type GroupKey = (String, u32, u32);
type Group = (Option<String>, PathBuf, Vec<TraceRun>);

/// Loads every data set below `root`, which is either a directory or an
/// archive (zip, tar, or a gzip/bzip2/xz-compressed tar).
pub fn load_experiment(root: impl AsRef<Path>) -> Result<DataSetCollection, LoadError> {
    let root = root.as_ref();
    if root.is_dir() {
        return load_dir(root);
    }
    let workspace = tempfile::tempdir()?;
    archive::extract(root, workspace.path())?;
    load_dir(workspace.path())
}

/// Loads an archive held in memory, e.g. an uploaded file.
pub fn load_archive_bytes(bytes: &[u8]) -> Result<DataSetCollection, LoadError> {
    let mut file = tempfile::NamedTempFile::new()?;
    file.write_all(bytes)?;
    file.flush()?;
    let workspace = tempfile::tempdir()?;
    archive::extract(file.path(), workspace.path())?;
    load_dir(workspace.path())
}

fn find_info_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    let mut entries: Vec<_> = fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let path = entry.path();
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.starts_with("._") || name == "__MACOSX" {
            continue;
        }
        if entry.file_type()?.is_dir() {
            find_info_files(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "info") {
            out.push(path);
        }
    }
    Ok(())
}

struct Resolved {
    info_path: PathBuf,
    entry: MetaEntry,
    raw_path: PathBuf,
}

fn load_dir(root: &Path) -> Result<DataSetCollection, LoadError> {
    let mut info_files = Vec::new();
    find_info_files(root, &mut info_files)?;
    if info_files.is_empty() {
        return Err(LoadError::EmptyArchive);
    }

    let relative = |p: &Path| p.strip_prefix(root).unwrap_or(p).to_path_buf();
    let mut resolved = Vec::new();
    for info_path in &info_files {
        let text = String::from_utf8_lossy(&fs::read(info_path)?).into_owned();
        let entries = parse_info(&text).map_err(|source| LoadError::Parse {
            path: relative(info_path),
            source,
        })?;
        let base = info_path.parent().unwrap_or(root);
        for entry in entries {
            let raw_path = base.join(entry.data_path.replace('\\', "/"));
            if !raw_path.is_file() {
                return Err(LoadError::MissingRawFile(relative(&raw_path)));
            }
            resolved.push(Resolved {
                info_path: info_path.clone(),
                entry,
                raw_path,
            });
        }
    }

    let parsed: Vec<Vec<TraceRun>> = resolved
        .par_iter()
        .map(|r| {
            let text = String::from_utf8_lossy(&fs::read(&r.raw_path)?).into_owned();
            parse_raw(&text).map_err(|source| LoadError::Parse {
                path: relative(&r.raw_path),
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut groups: BTreeMap<GroupKey, Group> = BTreeMap::new();
    for (r, mut runs) in resolved.into_iter().zip(parsed) {
        let expected = &r.entry.instances;
        if runs.len() == expected.len() {
            for (run, inst) in runs.iter_mut().zip(expected) {
                run.instance_id = Some(inst.instance_id);
                if run.budget() != inst.used_budget {
                    warn!(
                        "{}: run of instance {} ends at {} evaluations, meta-data says {}",
                        relative(&r.raw_path).display(),
                        inst.instance_id,
                        run.budget(),
                        inst.used_budget
                    );
                }
            }
        } else {
            warn!(
                "{}: {} runs in raw data, {} instances in meta-data",
                relative(&r.raw_path).display(),
                runs.len(),
                expected.len()
            );
        }
        let key = (r.entry.alg_id.clone(), r.entry.func_id, r.entry.dimension);
        let group = groups
            .entry(key)
            .or_insert_with(|| (r.entry.suite.clone(), r.info_path.clone(), Vec::new()));
        group.2.extend(runs);
    }

    let mut datasets = Vec::with_capacity(groups.len());
    for ((alg_id, func_id, dimension), (suite, info_path, runs)) in groups {
        if runs.is_empty() {
            warn!("{alg_id} f{func_id} DIM {dimension}: no runs in raw data; skipped");
            continue;
        }
        let direction = detect_direction(&runs).map_err(|_| LoadError::MixedMonotonicity {
            path: relative(&info_path),
        })?;
        let mut param_names: Vec<String> = Vec::new();
        for name in runs.iter().flat_map(|r| r.param_names.iter()) {
            if !param_names.contains(name) {
                param_names.push(name.clone());
            }
        }
        datasets.push(DataSet {
            alg_id,
            func_id,
            dimension,
            suite,
            direction,
            runs,
            param_names,
        });
    }
    if datasets.is_empty() {
        return Err(LoadError::EmptyArchive);
    }
    Ok(DataSetCollection::new(datasets))
}
