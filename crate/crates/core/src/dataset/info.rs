use super::{InstanceRecord, MetaEntry, ParseError};

const FUNC_ID: &str = "funcId";
const DIM: &str = "DIM";
const ALG_ID: &str = "algId";
const SUITE: &str = "suite";

/// Parses the content of one `.info` meta-data file.
///
/// Each block starts with a `name = value` header line, may carry a `%`
/// comment line, and ends with the data line: the relative raw-data path
/// followed by `instance:budget|best` tokens. A data line may be wrapped
/// over several physical lines.
pub fn parse_info(text: &str) -> Result<Vec<MetaEntry>, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::EmptyFile);
    }

    let mut blocks: Vec<RawBlock<'_>> = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if is_header(trimmed) {
            blocks.push(RawBlock {
                header: Some(trimmed),
                comment: None,
                data: String::new(),
            });
            continue;
        }
        if blocks.is_empty() {
            blocks.push(RawBlock {
                header: None,
                comment: None,
                data: String::new(),
            });
        }
        let block = blocks.last_mut().expect("block pushed above");
        if trimmed.starts_with('%') && block.comment.is_none() && block.data.is_empty() {
            block.comment = Some(line.trim_end_matches(['\r', '\n']));
        } else {
            if !block.data.is_empty() {
                block.data.push(' ');
            }
            block.data.push_str(trimmed);
        }
    }

    blocks.into_iter().map(RawBlock::into_entry).collect()
}

struct RawBlock<'a> {
    header: Option<&'a str>,
    comment: Option<&'a str>,
    data: String,
}

impl RawBlock<'_> {
    fn into_entry(self) -> Result<MetaEntry, ParseError> {
        let pairs = match self.header {
            Some(h) => parse_header(h),
            None => Vec::new(),
        };
        let lookup = |key: &str| {
            pairs
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| ParseError::MissingMandatoryKey(key.to_string()))
        };
        let func_id = parse_id(FUNC_ID, &lookup(FUNC_ID)?)?;
        let dimension = parse_id(DIM, &lookup(DIM)?)?;
        if dimension == 0 {
            return Err(ParseError::InvalidValue {
                key: DIM.into(),
                value: "0".into(),
            });
        }
        let alg_id = lookup(ALG_ID)?;
        let suite = lookup(SUITE).ok();
        let extra = pairs
            .iter()
            .filter(|(k, _)| ![FUNC_ID, DIM, ALG_ID, SUITE].contains(&k.as_str()))
            .cloned()
            .collect();

        let mut tokens = self.data.split(',').map(str::trim).filter(|t| !t.is_empty());
        let data_path = tokens
            .next()
            .ok_or(ParseError::MissingDataLine { func_id, dimension })?
            .to_string();
        let instances = tokens.map(parse_instance_token).collect::<Result<Vec<_>, _>>()?;
        if instances.is_empty() {
            return Err(ParseError::MissingDataLine { func_id, dimension });
        }

        Ok(MetaEntry {
            suite,
            func_id,
            dimension,
            alg_id,
            extra,
            comment: self.comment.map(String::from),
            data_path,
            instances,
        })
    }
}

fn is_header(line: &str) -> bool {
    !line.starts_with('%')
        && split_outside_quotes(line)
            .first()
            .is_some_and(|first| first.contains('='))
}

/// Splits on commas that are not inside single or double quotes.
fn split_outside_quotes(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut quote: Option<char> = None;
    let mut start = 0;
    for (i, c) in line.char_indices() {
        match (quote, c) {
            (None, '\'' | '"') => quote = Some(c),
            (Some(q), c) if c == q => quote = None,
            (None, ',') => {
                out.push(&line[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&line[start..]);
    out
}

fn parse_header(line: &str) -> Vec<(String, String)> {
    split_outside_quotes(line)
        .into_iter()
        .filter_map(|pair| {
            let (key, value) = pair.split_once('=')?;
            Some((key.trim().to_string(), unquote(value.trim()).to_string()))
        })
        .collect()
}

fn unquote(value: &str) -> &str {
    for q in ['\'', '"'] {
        if value.len() >= 2 && value.starts_with(q) && value.ends_with(q) {
            return &value[1..value.len() - 1];
        }
    }
    value
}

fn parse_id(key: &str, value: &str) -> Result<u32, ParseError> {
    value.trim().parse().map_err(|_| ParseError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_instance_token(token: &str) -> Result<InstanceRecord, ParseError> {
    let malformed = || ParseError::MalformedInstanceToken(token.to_string());
    let (id, rest) = token.split_once(':').ok_or_else(malformed)?;
    let (budget, best) = rest.split_once('|').ok_or_else(malformed)?;
    let instance_id = id.trim().parse::<i64>().map_err(|_| malformed())?;
    let used_budget = parse_count(budget.trim()).ok_or_else(malformed)?;
    let best_value = best.trim().parse::<f64>().map_err(|_| malformed())?;
    if used_budget == 0 {
        return Err(malformed());
    }
    Ok(InstanceRecord {
        instance_id,
        used_budget,
        best_value,
    })
}

/// Evaluation counts in either integer or scientific notation. Values that
/// are fractional or beyond the signed 64-bit range are rejected.
pub(super) fn parse_count(text: &str) -> Option<u64> {
    if let Ok(v) = text.trim_start_matches('+').parse::<u64>() {
        return (v <= i64::MAX as u64).then_some(v);
    }
    let v = text.parse::<f64>().ok()?;
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v < 9.223_372_036_854_776e18 {
        Some(v as u64)
    } else {
        None
    }
}
