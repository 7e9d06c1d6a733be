//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request as HttpRequest, StatusCode};
use http_body_util::BodyExt;
use ioha_core::alignment::{align_fixed_target, AnchorSequence, Perspective, ScaleChoice, Spacing};
use ioha_core::comparison::{ks_statistic, ks_two_sample, GlickoState};
use ioha_core::dataset::{write_experiment, write_raw};
use ioha_core::metrics::{ecdf_functions, ecdf_single, ecdf_targets, ert, fd_bins};
use ioha_core::{
    generate_sequence, glicko2_game_update, glicko2_rank, load_experiment, parse_info, parse_raw, DataSet, Direction,
    Preference, RankProblem, Record, Score, TraceRun,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;
use tower::ServiceExt;

type Outcome = Result<String, String>;
type Check = fn(&Value) -> Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn testdata(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata")
        .join(rel)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("took {:.2} s, limit {:.0} s", t.as_secs_f64(), limit.as_secs_f64())
    })
}

// Appendix golden files

fn golden_files() -> Outcome {
    let start = Instant::now();
    let info = std::fs::read_to_string(testdata("golden/self_GA/IOHprofiler_f19.info")).map_err(|e| e.to_string())?;
    let entries = parse_info(&info).map_err(|e| e.to_string())?;
    ensure(entries.len() == 2, || format!("{} meta-data blocks", entries.len()))?;
    let summary = |i: usize| {
        let e = &entries[i];
        let finals: Vec<f64> = e.instances.iter().map(|x| x.best_value).collect();
        let budgets: Vec<u64> = e.instances.iter().map(|x| x.used_budget).collect();
        let ids: Vec<i64> = e.instances.iter().map(|x| x.instance_id).collect();
        (
            e.func_id,
            e.dimension,
            e.alg_id.clone(),
            e.suite.clone(),
            finals,
            budgets,
            ids,
        )
    };
    ensure(
        summary(0)
            == (
                19,
                16,
                "self_GA".into(),
                Some("PBO".into()),
                vec![32.0, 32.0, 32.0, 28.0, 32.0],
                vec![16001; 5],
                vec![1; 5],
            ),
        || format!("first block {:?}", summary(0)),
    )?;
    ensure(
        summary(1)
            == (
                19,
                100,
                "self_GA".into(),
                Some("PBO".into()),
                vec![192.0, 188.0, 180.0, 176.0, 176.0],
                vec![100001; 5],
                vec![1; 5],
            ),
        || format!("second block {:?}", summary(1)),
    )?;

    let raw = std::fs::read_to_string(testdata("appendix_raw.dat")).map_err(|e| e.to_string())?;
    let runs = parse_raw(&raw).map_err(|e| e.to_string())?;
    ensure(runs.len() == 2, || format!("{} runs in raw table", runs.len()))?;
    let run2: Vec<(u64, f64, Vec<f64>)> = runs[1]
        .records
        .iter()
        .map(|r| (r.evals, r.best_so_far, r.params.clone()))
        .collect();
    ensure(
        run2 == [(1, 320.0, vec![1.0]), (24, 344.0, vec![2.0]), (60, 364.0, vec![3.0])]
            && runs[1].param_names == ["parameter"],
        || format!("run 2 = {run2:?}"),
    )?;
    ensure(parse_raw(&write_raw(&runs)).ok() == Some(runs.clone()), || {
        "raw round trip differs".into()
    })?;

    let collection = load_experiment(testdata("golden.zip")).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_experiment(&collection, dir.path()).map_err(|e| e.to_string())?;
    let reloaded = load_experiment(dir.path()).map_err(|e| e.to_string())?;
    ensure(reloaded == collection, || "collection round trip differs".into())?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!(
        "{} data sets, {:.0} ms",
        collection.len(),
        start.elapsed().as_secs_f64() * 1e3
    ))
}

// Target sequence

fn target_sequence() -> Outcome {
    let s = generate_sequence(
        4.0,
        16.0,
        Spacing::Step(1.33),
        ScaleChoice::Linear,
        Perspective::FixedTarget,
    )
    .map_err(|e| e.to_string())?;
    let v = s.values();
    let expected = [4.0, 5.33, 6.66];
    for (k, &e) in expected.iter().enumerate() {
        ensure((v[k] - e).abs() <= 1e-9, || format!("anchor {k} = {}", v[k]))?;
    }
    ensure((v[v.len() - 1] - 16.0).abs() <= 1e-9, || {
        format!("last anchor {}", v[v.len() - 1])
    })?;
    Ok(format!("{} anchors, {} .. {}", v.len(), v[0], v[v.len() - 1]))
}

// ERT against a restart simulation

/// Restarts uniformly drawn runs until one succeeds, accumulating the
/// evaluations spent; returns evaluations per success over `draws` runs.
fn simulate_restarts(times: &[f64], budgets: &[f64], draws: usize, rng: &mut impl Rng) -> f64 {
    let (mut cost, mut episodes) = (0.0, 0u64);
    for _ in 0..draws {
        let i = rng.gen_range(0..times.len());
        if times[i].is_finite() {
            cost += times[i];
            episodes += 1;
        } else {
            cost += budgets[i];
        }
    }
    cost / episodes as f64
}

fn ert_oracle() -> Outcome {
    let start = Instant::now();
    let instances: Vec<(Vec<f64>, Vec<f64>)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        (0..1000)
            .map(|_| {
                let r = rng.gen_range(1..=10);
                let fail = rng.gen_range(0.0..0.6);
                let budgets: Vec<f64> = (0..r).map(|_| f64::from(rng.gen_range(1..=100u32))).collect();
                let times = budgets
                    .iter()
                    .map(|&b| {
                        if rng.gen_bool(fail) {
                            f64::INFINITY
                        } else {
                            f64::from(rng.gen_range(1..=b as u32))
                        }
                    })
                    .collect();
                (times, budgets)
            })
            .collect()
    };
    let results: Vec<Result<Option<f64>, String>> = instances
        .par_iter()
        .enumerate()
        .map(|(k, (times, budgets))| {
            let e = ert(times, budgets).map_err(|e| e.to_string())?;
            if times.iter().all(|t| t.is_infinite()) {
                return if e == f64::INFINITY {
                    Ok(None)
                } else {
                    Err(format!("instance {k}: all fail but ERT {e}"))
                };
            }
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            let sim = simulate_restarts(times, budgets, 1_000_000, &mut rng);
            let rel = (sim - e).abs() / e;
            if rel < 0.01 {
                Ok(Some(rel))
            } else {
                Err(format!(
                    "instance {k}: ERT {e} vs simulated {sim} ({:.2}%)",
                    rel * 100.0
                ))
            }
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut all_fail = 0;
    for r in results {
        match r? {
            Some(rel) => worst = worst.max(rel),
            None => all_fail += 1,
        }
    }
    within_time(start, Duration::from_secs(60))?;
    Ok(format!(
        "worst relative error {:.3}%, {all_fail} all-fail instances, {:.1} s",
        worst * 100.0,
        start.elapsed().as_secs_f64()
    ))
}

// ECDF algebra

fn first_hit(run: &TraceRun, v: f64) -> f64 {
    run.records
        .iter()
        .find(|r| r.best_so_far >= v)
        .map_or(f64::INFINITY, |r| r.evals as f64)
}

fn random_dataset(rng: &mut impl Rng, func_id: u32, runs: usize) -> DataSet {
    let runs = (0..runs)
        .map(|_| {
            let mut evals = 0;
            let mut best = 0.0;
            let records = (0..rng.gen_range(1..8))
                .map(|_| {
                    evals += rng.gen_range(1..6);
                    best += f64::from(rng.gen_range(0..4u32));
                    Record {
                        evals,
                        best_so_far: best,
                        current: None,
                        params: vec![],
                    }
                })
                .collect();
            TraceRun {
                instance_id: None,
                param_names: vec![],
                records,
            }
        })
        .collect();
    DataSet {
        alg_id: "A".into(),
        func_id,
        dimension: 1,
        suite: None,
        direction: Direction::Maximize,
        param_names: vec![],
        runs,
    }
}

fn ecdf_algebra() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let grid: Vec<f64> = (0..45).map(f64::from).collect();
    for inst in 0..500 {
        let r = rng.gen_range(1..=5);
        let nf = rng.gen_range(1..=3);
        let data: Vec<DataSet> = (0..nf).map(|f| random_dataset(&mut rng, f as u32 + 1, r)).collect();
        let targets: Vec<Vec<f64>> = (0..nf)
            .map(|_| {
                let mut t: Vec<f64> = (0..rng.gen_range(1..=4))
                    .map(|_| f64::from(rng.gen_range(0..15u32)))
                    .collect();
                t.sort_by(f64::total_cmp);
                t.dedup();
                t
            })
            .collect();
        let matrices: Vec<_> = data
            .iter()
            .zip(&targets)
            .map(|(ds, t)| {
                let seq = AnchorSequence::from_unsorted(t.clone(), Perspective::FixedTarget).unwrap();
                align_fixed_target(ds, &seq).unwrap()
            })
            .collect();

        for (f, (ds, vs)) in data.iter().zip(&targets).enumerate() {
            let agg = ecdf_targets::<f64, Ratio<i64>>(&matrices[f], &grid).map_err(|e| e.to_string())?;
            let singles: Vec<_> = vs
                .iter()
                .map(|&v| {
                    let times: Vec<f64> = ds.runs.iter().map(|run| first_hit(run, v)).collect();
                    ecdf_single::<f64, Ratio<i64>>(&times, &grid).unwrap()
                })
                .collect();
            for (k, t) in grid.iter().enumerate() {
                let mean =
                    singles.iter().map(|s| s.proportion[k]).sum::<Ratio<i64>>() / Ratio::from_integer(vs.len() as i64);
                ensure(agg.proportion[k] == mean, || {
                    format!(
                        "instance {inst}, function {f}, t={}: {} vs mean {}",
                        t, agg.proportion[k], mean
                    )
                })?;
            }
        }

        let multi = ecdf_functions::<f64, Ratio<i64>>(&matrices, &grid).map_err(|e| e.to_string())?;
        let pairs = r as i64 * targets.iter().map(|t| t.len() as i64).sum::<i64>();
        for (k, &t) in grid.iter().enumerate() {
            let hits: usize = data
                .iter()
                .zip(&targets)
                .flat_map(|(ds, vs)| {
                    vs.iter()
                        .map(move |&v| ds.runs.iter().filter(|run| first_hit(run, v) <= t).count())
                })
                .sum();
            let expected = Ratio::new(hits as i64, pairs);
            ensure(multi.proportion[k] == expected, || {
                format!("instance {inst}, t={t}: {} vs {}", multi.proportion[k], expected)
            })?;
        }
    }
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("500 instances exact, {:.2} s", start.elapsed().as_secs_f64()))
}

// Kolmogorov-Smirnov

fn multisets(max: usize) -> Vec<Vec<f64>> {
    fn extend(prefix: &mut Vec<f64>, from: u32, max: usize, out: &mut Vec<Vec<f64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max {
            return;
        }
        for v in from..=5 {
            prefix.push(f64::from(v));
            extend(prefix, v, max, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max, &mut out);
    out
}

fn sup_difference(a: &[f64], b: &[f64]) -> f64 {
    (1..=5)
        .map(|x| {
            let x = f64::from(x);
            let fa = a.iter().filter(|&&v| v <= x).count() as f64 / a.len() as f64;
            let fb = b.iter().filter(|&&v| v <= x).count() as f64 / b.len() as f64;
            (fa - fb).abs()
        })
        .fold(0.0, f64::max)
}

fn ks_correctness() -> Outcome {
    let all = multisets(8);
    let mismatches: usize = all
        .par_iter()
        .map(|a| {
            all.iter()
                .filter(|b| (ks_statistic(a, b).unwrap() - sup_difference(a, b)).abs() > 1e-12)
                .count()
        })
        .sum();
    ensure(mismatches == 0, || format!("{mismatches} sample pairs disagree"))?;
    let a: Vec<f64> = (0..20).map(f64::from).collect();
    let b: Vec<f64> = (100..120).map(f64::from).collect();
    let (d, p) = ks_two_sample(&a, &b).map_err(|e| e.to_string())?;
    ensure(d == 1.0 && p < 1e-6, || format!("D={d}, p={p} for disjoint samples"))?;
    let (d, p) = ks_two_sample(&a, &a).map_err(|e| e.to_string())?;
    ensure(d == 0.0 && p == 1.0, || format!("identical samples give D={d}, p={p}"))?;
    let (_, p_far) = ks_two_sample(&a, &b).unwrap();
    Ok(format!(
        "{} multisets, {} pairs; p(D=1, n=20) = {p_far:.2e}",
        all.len(),
        all.len() * all.len()
    ))
}

// Glicko-2

/// Step-by-step rating period with the volatility found by bisection.
fn glicko_reference(r: f64, rd: f64, sigma: f64, games: &[(f64, f64, f64)], tau: f64) -> (f64, f64, f64) {
    let scale = 173.7178;
    let mu = (r - 1500.0) / scale;
    let phi = rd / scale;
    let g = |phi: f64| 1.0 / (1.0 + 3.0 * phi * phi / std::f64::consts::PI.powi(2)).sqrt();
    let (mut v_inv, mut sum) = (0.0, 0.0);
    for &(rj, rdj, s) in games {
        let (muj, phij) = ((rj - 1500.0) / scale, rdj / scale);
        let e = 1.0 / (1.0 + (-g(phij) * (mu - muj)).exp());
        v_inv += g(phij).powi(2) * e * (1.0 - e);
        sum += g(phij) * (s - e);
    }
    let v = 1.0 / v_inv;
    let delta = v * sum;
    let a = (sigma * sigma).ln();
    let f = |x: f64| {
        let ex = x.exp();
        ex * (delta * delta - phi * phi - v - ex) / (2.0 * (phi * phi + v + ex).powi(2)) - (x - a) / (tau * tau)
    };
    let (mut lo, mut hi) = (a - 20.0, a + 20.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sigma_new = (0.25 * (lo + hi)).exp();
    let phi_star = (phi * phi + sigma_new * sigma_new).sqrt();
    let phi_new = 1.0 / (1.0 / (phi_star * phi_star) + 1.0 / v).sqrt();
    let mu_new = mu + phi_new * phi_new * sum;
    (mu_new * scale + 1500.0, phi_new * scale, sigma_new)
}

fn glicko_example() -> Outcome {
    let player = GlickoState::new(1500.0, 200.0, 0.06);
    let games = [
        (GlickoState::new(1400.0, 30.0, 0.06), Score::Win),
        (GlickoState::new(1550.0, 100.0, 0.06), Score::Loss),
        (GlickoState::new(1700.0, 300.0, 0.06), Score::Loss),
    ];
    let out = glicko2_game_update::<f64>(&player, &games, 0.5).map_err(|e| e.to_string())?;
    let (r, rd, s) = glicko_reference(
        1500.0,
        200.0,
        0.06,
        &[(1400.0, 30.0, 1.0), (1550.0, 100.0, 0.0), (1700.0, 300.0, 0.0)],
        0.5,
    );
    ensure(
        (r - 1464.06).abs() <= 0.5 && (rd - 151.52).abs() <= 0.5 && (s - 0.05999).abs() <= 1e-4,
        || format!("reference gives ({r}, {rd}, {s})"),
    )?;
    ensure((out.rating - 1464.06).abs() <= 0.5, || format!("rating {}", out.rating))?;
    ensure((out.deviation - 151.52).abs() <= 0.5, || {
        format!("deviation {}", out.deviation)
    })?;
    ensure((out.volatility - 0.05999).abs() <= 1e-4, || {
        format!("volatility {}", out.volatility)
    })?;
    ensure(
        (out.rating - r).abs() < 1e-3 && (out.deviation - rd).abs() < 1e-3 && (out.volatility - s).abs() < 1e-6,
        || {
            format!(
                "library ({}, {}, {}) vs reference ({r}, {rd}, {s})",
                out.rating, out.deviation, out.volatility
            )
        },
    )?;
    Ok(format!(
        "rating {:.2}, RD {:.2}, sigma {:.5}",
        out.rating, out.deviation, out.volatility
    ))
}

fn ranking_sanity() -> Outcome {
    let start = Instant::now();
    let algs: Vec<String> = ["one", "two", "three"].map(String::from).to_vec();
    let problem = RankProblem {
        label: "constant".into(),
        samples: vec![Some(vec![1.0]), Some(vec![2.0]), Some(vec![3.0])],
    };
    let mut correct = 0;
    for seed in 0..100 {
        let ranked = glicko2_rank::<f64>(
            &algs,
            std::slice::from_ref(&problem),
            Preference::LowerIsBetter,
            25,
            seed,
            0.5,
        )
        .map_err(|e| e.to_string())?;
        let order: Vec<&str> = ranked.iter().map(|e| e.alg_id.as_str()).collect();
        if order == ["one", "two", "three"] {
            correct += 1;
        }
    }
    ensure(correct == 100, || format!("{correct}/100 seeds ordered correctly"))?;
    within_time(start, Duration::from_secs(5))?;
    Ok(format!("100/100 seeds, {:.0} ms", start.elapsed().as_secs_f64() * 1e3))
}

fn freedman_diaconis() -> Outcome {
    let s: Vec<f64> = (1..=8).map(f64::from).collect();
    let w = fd_bins(&s).map_err(|e| e.to_string())?.width;
    ensure(w == 3.5, || format!("width {w}"))?;
    let doubled: Vec<f64> = s.iter().chain(&s).copied().collect();
    let w2 = fd_bins(&doubled).map_err(|e| e.to_string())?.width;
    let ratio = w2 / w;
    ensure((ratio - 2f64.powf(-1.0 / 3.0)).abs() < 1e-12, || {
        format!("ratio {ratio}")
    })?;
    Ok(format!("width 3.5, duplicated ratio {ratio:.12}"))
}

// CLI determinism

fn run_cli(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["ioha"];
    argv.extend_from_slice(args);
    let code = ioha_cli::run(argv, &mut out, &mut err);
    (code, out, err)
}

fn cli_determinism() -> Outcome {
    let archive = testdata("golden.zip");
    let archive = archive.to_str().unwrap();
    let targets = testdata("targets.csv");
    let targets = targets.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["summary", archive],
        vec![
            "stats", archive, "--func", "19", "--dim", "16", "--fmin", "4", "--fmax", "16", "--step", "1.33",
        ],
        vec![
            "stats",
            archive,
            "--dim",
            "100",
            "--perspective",
            "budget",
            "--format",
            "latex",
        ],
        vec!["overview", archive, "--dim", "16"],
        vec!["ecdf", archive, "--dim", "16", "--format", "json"],
        vec!["ecdf", archive, "--dim", "16", "--targets-file", targets],
        vec!["auc", archive, "--dim", "16"],
        vec!["test", archive, "--dim", "16", "--alpha", "0.05"],
        vec![
            "rank",
            archive,
            "--dim",
            "16",
            "--target-source",
            "radar",
            "--rounds",
            "25",
            "--seed",
            "1",
        ],
        vec![
            "rank",
            archive,
            "--dim",
            "100",
            "--perspective",
            "budget",
            "--format",
            "json",
        ],
        vec!["params", archive, "--dim", "16"],
        vec!["samples", archive, "--dim", "16", "--layout", "wide"],
        vec!["radar", archive, "--dim", "100"],
        vec!["density", archive, "--dim", "16"],
    ];
    for args in &invocations {
        let first = run_cli(args);
        let second = run_cli(args);
        ensure(first.0 == 0, || {
            format!(
                "`{}` exited {}: {}",
                args.join(" "),
                first.0,
                String::from_utf8_lossy(&first.2)
            )
        })?;
        ensure(!first.1.is_empty(), || format!("`{}` wrote nothing", args.join(" ")))?;
        ensure(first == second, || {
            format!("`{}` is not byte-identical across runs", args.join(" "))
        })?;
    }
    let (_, out, _) = run_cli(&invocations[1]);
    let csv = String::from_utf8(out).unwrap();
    let anchors: Vec<&str> = csv
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("self_GA"))
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    ensure(
        anchors.first() == Some(&"4") && anchors.get(1) == Some(&"5.33") && anchors.last() == Some(&"16"),
        || format!("stats anchors {anchors:?}"),
    )?;
    Ok(format!("{} invocations byte-identical", invocations.len()))
}

// Service contract

async fn call(app: &axum::Router, req: HttpRequest<Body>) -> (StatusCode, Value) {
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn is_number_like(v: &Value) -> bool {
    v.is_number() || v.is_null() || v == "Inf" || v == "-Inf"
}

fn check_envelope(v: &Value, what: &str) -> Result<(), String> {
    ensure(v["input"].is_object() && !v["result"].is_null(), || {
        format!("{what}: missing input/result")
    })
}

fn check_stats(v: &Value) -> Result<(), String> {
    check_envelope(v, "stats")?;
    let algs = v["result"].as_array().ok_or("stats: result is not an array")?;
    ensure(!algs.is_empty(), || "stats: no algorithms".into())?;
    for a in algs {
        ensure(a["algId"].is_string(), || "stats: algId".into())?;
        for row in a["rows"].as_array().ok_or("stats: rows")? {
            ensure(
                is_number_like(&row["anchor"]) && row["runs"].is_u64() && is_number_like(&row["ert"]),
                || format!("stats row {row}"),
            )?;
            let s = &row["summary"];
            ensure(
                s.is_null() || (is_number_like(&s["mean"]) && s["quantiles"].as_object().is_some_and(|q| q.len() == 9)),
                || format!("stats summary {s}"),
            )?;
        }
    }
    Ok(())
}

fn check_ecdf(v: &Value) -> Result<(), String> {
    check_envelope(v, "ecdf")?;
    for c in v["result"].as_array().ok_or("ecdf: result is not an array")? {
        let (x, y) = (c["x"].as_array().ok_or("ecdf: x")?, c["y"].as_array().ok_or("ecdf: y")?);
        ensure(x.len() == y.len() && !x.is_empty(), || "ecdf: x/y lengths".into())?;
        ensure(
            y.iter().all(|p| p.as_f64().is_some_and(|p| (0.0..=1.0).contains(&p))),
            || "ecdf: y outside [0,1]".into(),
        )?;
    }
    Ok(())
}

fn check_test(v: &Value) -> Result<(), String> {
    check_envelope(v, "test")?;
    let r = &v["result"];
    let k = r["algorithms"].as_array().ok_or("test: algorithms")?.len();
    ensure(r["pairs"].as_u64() == Some((k * (k - 1) / 2) as u64), || {
        "test: pairs".into()
    })?;
    for key in ["statistic", "pRaw", "pCorrected", "decision"] {
        let m = r[key].as_array().ok_or_else(|| format!("test: {key}"))?;
        ensure(
            m.len() == k && m.iter().all(|row| row.as_array().is_some_and(|row| row.len() == k)),
            || format!("test: {key} is not {k}x{k}"),
        )?;
    }
    ensure(r["edges"].is_array(), || "test: edges".into())
}

fn check_rank(v: &Value) -> Result<(), String> {
    check_envelope(v, "rank")?;
    let entries = v["result"].as_array().ok_or("rank: result is not an array")?;
    for (i, e) in entries.iter().enumerate() {
        ensure(
            e["rank"].as_u64() == Some(i as u64 + 1) && e["algId"].is_string() && e["rating"].is_number(),
            || format!("rank entry {e}"),
        )?;
    }
    ensure(v["input"]["seed"].is_u64() && v["input"]["rounds"].is_u64(), || {
        "rank: seed/rounds echo".into()
    })
}

async fn service_round_trip() -> Outcome {
    let app = ioha_service::router(&ioha_service::ServiceConfig::default());
    let zip = std::fs::read(testdata("golden.zip")).map_err(|e| e.to_string())?;
    let boundary = "acceptance-boundary";
    let mut body = format!(
        "--{boundary}\r\nContent-Disposition: form-data; name=\"archive\"; filename=\"golden.zip\"\r\nContent-Type: application/zip\r\n\r\n"
    )
    .into_bytes();
    body.extend(zip);
    body.extend(format!("\r\n--{boundary}--\r\n").into_bytes());
    let upload = HttpRequest::post("/api/sessions")
        .header("content-type", format!("multipart/form-data; boundary={boundary}"))
        .body(Body::from(body))
        .unwrap();
    let (status, v) = call(&app, upload).await;
    ensure(status == StatusCode::OK, || format!("upload returned {status}: {v}"))?;
    let id = v["sessionId"].as_str().ok_or("upload: no sessionId")?.to_string();
    ensure(
        v["summary"]["algorithms"]
            .as_array()
            .is_some_and(|a| a.contains(&"self_GA".into())),
        || format!("upload summary {}", v["summary"]),
    )?;

    let steps: [(&str, Check); 4] = [
        ("stats?func=19&dim=16", check_stats),
        ("ecdf?func=19&dim=16", check_ecdf),
        ("test?func=19&dim=16&alpha=0.01", check_test),
        ("rank?dim=16&rounds=25&seed=7", check_rank),
    ];
    for (q, check) in steps {
        let uri = format!("/api/sessions/{id}/{q}");
        let (status, v) = call(&app, HttpRequest::get(&uri).body(Body::empty()).unwrap()).await;
        ensure(status == StatusCode::OK, || format!("{q} returned {status}: {v}"))?;
        check(&v)?;
        let (_, again) = call(&app, HttpRequest::get(&uri).body(Body::empty()).unwrap()).await;
        ensure(again == v, || format!("{q} is not repeatable"))?;
    }
    Ok("upload, stats, ecdf, test, rank: 200 with valid bodies".into())
}

fn service_contract() -> Outcome {
    tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .map_err(|e| e.to_string())?
        .block_on(service_round_trip())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("appendix golden files", golden_files),
        ("target sequence 4..16 step 1.33", target_sequence),
        ("ERT vs restart simulation", ert_oracle),
        ("ECDF algebra", ecdf_algebra),
        ("Kolmogorov-Smirnov correctness", ks_correctness),
        ("Glicko-2 worked example", glicko_example),
        ("ranking sanity", ranking_sanity),
        ("Freedman-Diaconis width", freedman_diaconis),
        ("CLI determinism", cli_determinism),
        ("service contract", service_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
