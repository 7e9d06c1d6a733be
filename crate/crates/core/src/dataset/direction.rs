use thiserror::Error;

use super::{Direction, TraceRun};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("runs are neither all maximizing nor all minimizing")]
pub struct MixedMonotonicity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Constant,
    Up,
    Down,
    Both,
}

fn trend(run: &TraceRun) -> Trend {
    let mut up = false;
    let mut down = false;
    for w in run.records.windows(2) {
        let (a, b) = (w[0].best_so_far, w[1].best_so_far);
        up |= b > a;
        down |= b < a;
    }
    match (up, down) {
        (false, false) => Trend::Constant,
        (true, false) => Trend::Up,
        (false, true) => Trend::Down,
        (true, true) => Trend::Both,
    }
}

/// Infers whether the runs were maximizing or minimizing from the
/// monotonicity of their best-so-far values. Constant runs carry no
/// information; if every run is constant the result is `Maximize`.
///
/// Fails when runs disagree or a single run is non-monotone.
pub fn detect_direction(runs: &[TraceRun]) -> Result<Direction, MixedMonotonicity> {
    let mut up = false;
    let mut down = false;
    for run in runs {
        match trend(run) {
            Trend::Constant => {}
            Trend::Up => up = true,
            Trend::Down => down = true,
            Trend::Both => return Err(MixedMonotonicity),
        }
    }
    match (up, down) {
        (true, true) => Err(MixedMonotonicity),
        (false, true) => Ok(Direction::Minimize),
        _ => Ok(Direction::Maximize),
    }
}
