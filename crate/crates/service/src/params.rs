//! Query-string parameters shared by the analysis endpoints.

use std::collections::HashMap;
use std::str::FromStr;

use ioha_core::pipeline::{RangeSpec, Selection, TargetMap};
use ioha_core::{Perspective, ScaleChoice};
use ioha_export::report::{Request, Scope, TargetSource};
use ioha_export::Layout;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamError(pub String);

type Params = HashMap<String, String>;

fn get<'a>(q: &'a Params, key: &str) -> Option<&'a str> {
    q.get(key).map(|s| s.trim()).filter(|s| !s.is_empty())
}

fn parse<T: FromStr>(q: &Params, key: &str) -> Result<Option<T>, ParamError> {
    get(q, key)
        .map(|s| s.parse().map_err(|_| ParamError(format!("cannot parse `{key}={s}`"))))
        .transpose()
}

fn choice<T: Copy>(q: &Params, key: &str, options: &[(&str, T)]) -> Result<Option<T>, ParamError> {
    let Some(s) = get(q, key) else { return Ok(None) };
    options
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(s))
        .map(|&(_, v)| Some(v))
        .ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            ParamError(format!("`{key}` must be one of {}", names.join(", ")))
        })
}

fn list(q: &Params, key: &str) -> Vec<String> {
    get(q, key)
        .map(|s| {
            s.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(String::from)
                .collect()
        })
        .unwrap_or_default()
}

fn numbers(q: &Params, key: &str) -> Result<Option<Vec<f64>>, ParamError> {
    let items = list(q, key);
    if items.is_empty() {
        return Ok(None);
    }
    items
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| ParamError(format!("cannot parse `{s}` in `{key}`")))
        })
        .collect::<Result<_, _>>()
        .map(Some)
}

/// `targetMap` is a JSON object from function id to a list of anchors,
/// e.g. `{"19":[4,8],"20":[10]}`.
fn target_map(q: &Params) -> Result<Option<TargetMap>, ParamError> {
    let Some(s) = get(q, "targetMap") else { return Ok(None) };
    let raw: HashMap<String, Vec<f64>> =
        serde_json::from_str(s).map_err(|e| ParamError(format!("`targetMap`: {e}")))?;
    let mut map = TargetMap::new();
    for (k, mut v) in raw {
        let f: u32 = k
            .parse()
            .map_err(|_| ParamError(format!("`targetMap`: `{k}` is not a function id")))?;
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(ParamError(format!("`targetMap`: function {f} needs finite anchors")));
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        map.insert(f, v);
    }
    if map.is_empty() {
        return Err(ParamError("`targetMap` is empty".into()));
    }
    Ok(Some(map))
}

pub fn request(q: &Params) -> Result<Request, ParamError> {
    let defaults = Request::default();
    let perspective = choice(
        q,
        "perspective",
        &[
            ("target", Perspective::FixedTarget),
            ("budget", Perspective::FixedBudget),
        ],
    )?
    .unwrap_or(defaults.perspective);
    let alpha = parse::<f64>(q, "alpha")?.unwrap_or(defaults.alpha);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ParamError(format!("`alpha` must lie in (0, 1), got {alpha}")));
    }
    Ok(Request {
        selection: Selection {
            func_id: parse(q, "func")?,
            dimension: parse(q, "dim")?,
            algorithms: list(q, "algs"),
        },
        perspective,
        range: RangeSpec {
            min: parse(q, "min")?,
            max: parse(q, "max")?,
            step: parse(q, "step")?,
            count: parse(q, "count")?,
            scale: choice(
                q,
                "scale",
                &[
                    ("linear", ScaleChoice::Linear),
                    ("log", ScaleChoice::Log),
                    ("auto", ScaleChoice::Auto),
                ],
            )?
            .unwrap_or(ScaleChoice::Auto),
        },
        anchors: numbers(q, "targets")?,
        target_map: target_map(q)?,
        target_source: choice(
            q,
            "targetSource",
            &[("default", TargetSource::Default), ("radar", TargetSource::Radar)],
        )?
        .unwrap_or_default(),
        scope: choice(
            q,
            "scope",
            &[("function", Scope::Function), ("dimension", Scope::Dimension)],
        )?
        .unwrap_or_default(),
        anchor: parse(q, "anchor")?,
        success_target: parse(q, "successTarget")?,
        alpha,
        rounds: parse(q, "rounds")?.unwrap_or(defaults.rounds),
        seed: parse(q, "seed")?.unwrap_or(defaults.seed),
        t_min: parse(q, "tMin")?,
        t_max: parse(q, "tMax")?,
        params: list(q, "params"),
        layout: choice(q, "layout", &[("long", Layout::Long), ("wide", Layout::Wide)])?.unwrap_or(Layout::Long),
    })
}
