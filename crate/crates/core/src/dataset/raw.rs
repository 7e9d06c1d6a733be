use log::warn;

use super::info::parse_count;
use super::{ParseError, Record, TraceRun};

pub const FUNCTION_EVALUATION: &str = "function evaluation";
pub const BEST_SO_FAR: &str = "best-so-far f(x)";
pub const CURRENT_VALUE: &str = "current f(x)";

struct Layout {
    evals: usize,
    best: usize,
    current: Option<usize>,
    params: Vec<(usize, String)>,
    width: usize,
}

impl Layout {
    fn from_separator(line: &str) -> Result<Self, ParseError> {
        // Column names are the double-quoted tokens; single quotes inside a
        // name are ordinary characters.
        let names: Vec<&str> = line.split('"').skip(1).step_by(2).collect();
        let find = |name: &str| names.iter().position(|n| *n == name);
        let evals =
            find(FUNCTION_EVALUATION).ok_or_else(|| ParseError::MissingMandatoryColumn(FUNCTION_EVALUATION.into()))?;
        let best = find(BEST_SO_FAR).ok_or_else(|| ParseError::MissingMandatoryColumn(BEST_SO_FAR.into()))?;
        let current = find(CURRENT_VALUE);
        let params = names
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != evals && *i != best && Some(*i) != current)
            .map(|(i, n)| (i, n.to_string()))
            .collect();
        Ok(Self {
            evals,
            best,
            current,
            params,
            width: names.len(),
        })
    }

    fn new_run(&self) -> TraceRun {
        TraceRun {
            instance_id: None,
            param_names: self.params.iter().map(|(_, n)| n.clone()).collect(),
            records: Vec::new(),
        }
    }
}

fn is_separator(line: &str) -> bool {
    line.starts_with(&format!("\"{FUNCTION_EVALUATION}\""))
}

/// Parses a raw-data file (`.dat`, `.cdat`, `.tdat`, ... or the
/// two-column layout) into one run per non-empty block.
///
/// Incomplete lines and rows whose evaluation count does not increase are
/// dropped with a warning.
pub fn parse_raw(text: &str) -> Result<Vec<TraceRun>, ParseError> {
    let mut runs = Vec::new();
    let mut current: Option<(Layout, TraceRun)> = None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if is_separator(trimmed) {
            let layout = Layout::from_separator(trimmed)?;
            let run = layout.new_run();
            if let Some((_, done)) = current.replace((layout, run)) {
                if !done.records.is_empty() {
                    runs.push(done);
                }
            }
            continue;
        }
        let Some((layout, run)) = current.as_mut() else {
            return Err(ParseError::NoSeparatorLine);
        };

        let fields: Vec<&str> = if trimmed.contains('\t') {
            trimmed.split('\t').map(str::trim).collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        if fields.len() != layout.width || fields.iter().any(|f| f.is_empty()) {
            warn!(
                "line {lineno}: expected {} columns, found {}; dropped",
                layout.width,
                fields.len()
            );
            continue;
        }

        let evals_text = fields[layout.evals];
        let evals = match parse_count(evals_text) {
            Some(e) => e,
            None if evals_text.parse::<f64>().is_ok() => {
                return Err(ParseError::EvaluationOutOfRange {
                    line: lineno,
                    text: evals_text.to_string(),
                })
            }
            None => {
                return Err(ParseError::NonNumericMandatoryField {
                    line: lineno,
                    text: evals_text.to_string(),
                })
            }
        };
        let best_so_far = fields[layout.best]
            .parse::<f64>()
            .map_err(|_| ParseError::NonNumericMandatoryField {
                line: lineno,
                text: fields[layout.best].to_string(),
            })?;
        let optional: Result<Vec<f64>, _> = layout
            .current
            .iter()
            .chain(layout.params.iter().map(|(i, _)| i))
            .map(|&i| fields[i].parse::<f64>())
            .collect();
        let Ok(mut optional) = optional else {
            warn!("line {lineno}: non-numeric optional column; dropped");
            continue;
        };
        let current_value = layout.current.map(|_| optional.remove(0));

        if run.records.last().is_some_and(|r| r.evals >= evals) {
            warn!("line {lineno}: evaluation count {evals} does not increase; dropped");
            continue;
        }
        run.records.push(Record {
            evals,
            best_so_far,
            current: current_value,
            params: optional,
        });
    }

    match current {
        None => Err(ParseError::NoSeparatorLine),
        Some((_, last)) => {
            if !last.records.is_empty() {
                runs.push(last);
            }
            Ok(runs)
        }
    }
}
