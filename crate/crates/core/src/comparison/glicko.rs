use serde::Serialize;

use super::ComparisonError;
use crate::scalar::Scalar;

/// Conversion factor between the rating scale and the internal scale.
pub const GLICKO_SCALE: f64 = 173.7178;
pub const DEFAULT_TAU: f64 = 0.5;
const INITIAL_RATING: f64 = 1500.0;
const INITIAL_DEVIATION: f64 = 350.0;
const INITIAL_VOLATILITY: f64 = 0.06;
const CONVERGENCE: f64 = 1e-6;
const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlickoState<T> {
    pub rating: T,
    pub deviation: T,
    pub volatility: T,
}

impl<T: Scalar> GlickoState<T> {
    pub fn new(rating: T, deviation: T, volatility: T) -> Self {
        Self {
            rating,
            deviation,
            volatility,
        }
    }

    /// Unrated player: 1500, RD 350, volatility 0.06.
    pub fn initial() -> Self {
        Self::new(
            T::lit(INITIAL_RATING),
            T::lit(INITIAL_DEVIATION),
            T::lit(INITIAL_VOLATILITY),
        )
    }

    fn mu(&self) -> T {
        (self.rating - T::lit(INITIAL_RATING)) / T::lit(GLICKO_SCALE)
    }

    fn phi(&self) -> T {
        self.deviation / T::lit(GLICKO_SCALE)
    }
}

impl<T: Scalar> Default for GlickoState<T> {
    fn default() -> Self {
        Self::initial()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Score {
    Loss,
    Draw,
    Win,
}

impl Score {
    pub fn value<T: Scalar>(self) -> T {
        match self {
            Score::Loss => T::zero(),
            Score::Draw => T::lit(0.5),
            Score::Win => T::one(),
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Score::Loss => Score::Win,
            Score::Draw => Score::Draw,
            Score::Win => Score::Loss,
        }
    }
}

fn g<T: Scalar>(phi: T) -> T {
    let pi2 = T::lit(std::f64::consts::PI * std::f64::consts::PI);
    T::one() / (T::one() + T::lit(3.0) * phi * phi / pi2).sqrt()
}

fn expected<T: Scalar>(mu: T, mu_j: T, g_j: T) -> T {
    T::one() / (T::one() + (-g_j * (mu - mu_j)).exp())
}

/// One Glicko-2 rating period for `player` against `games`, each an
/// opponent's pre-period state and the player's score.
///
/// The new volatility solves the period's volatility equation with the
/// Illinois variant of regula falsi to a bracket width of 1e-6. A player
/// with no games keeps rating and volatility; only the deviation grows.
pub fn glicko2_game_update<T: Scalar>(
    player: &GlickoState<T>,
    games: &[(GlickoState<T>, Score)],
    tau: T,
) -> Result<GlickoState<T>, ComparisonError> {
    if !(tau > T::zero()) {
        return Err(ComparisonError::InvalidTau(tau.to_f64().unwrap_or(f64::NAN)));
    }
    let scale = T::lit(GLICKO_SCALE);
    let mu = player.mu();
    let phi = player.phi();
    let sigma = player.volatility;

    if games.is_empty() {
        let phi_star = (phi * phi + sigma * sigma).sqrt();
        return Ok(GlickoState::new(player.rating, phi_star * scale, sigma));
    }

    let mut inv_v = T::zero();
    let mut improvement = T::zero();
    for (opp, score) in games {
        let g_j = g(opp.phi());
        let e = expected(mu, opp.mu(), g_j);
        inv_v = inv_v + g_j * g_j * e * (T::one() - e);
        improvement = improvement + g_j * (score.value::<T>() - e);
    }
    let v = T::one() / inv_v;
    let delta = v * improvement;

    let a = (sigma * sigma).ln();
    let phi2 = phi * phi;
    let two = T::lit(2.0);
    let f = |x: T| {
        let ex = x.exp();
        let denom = phi2 + v + ex;
        ex * (delta * delta - phi2 - v - ex) / (two * denom * denom) - (x - a) / (tau * tau)
    };

    let mut lo = a;
    let mut hi = if delta * delta > phi2 + v {
        (delta * delta - phi2 - v).ln()
    } else {
        let mut k = 1;
        while f(a - T::from_count(k) * tau) < T::zero() {
            k += 1;
            if k > MAX_ITERATIONS {
                return Err(ComparisonError::VolatilitySolverNoConvergence(MAX_ITERATIONS));
            }
        }
        a - T::from_count(k) * tau
    };
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    let eps = T::lit(CONVERGENCE);
    let mut iterations = 0;
    while (hi - lo).abs() > eps {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(ComparisonError::VolatilitySolverNoConvergence(MAX_ITERATIONS));
        }
        let c = lo + (lo - hi) * f_lo / (f_hi - f_lo);
        let f_c = f(c);
        if f_c * f_hi <= T::zero() {
            lo = hi;
            f_lo = f_hi;
        } else {
            f_lo = f_lo / two;
        }
        hi = c;
        f_hi = f_c;
    }
    let new_sigma = (lo / two).exp();

    let phi_star = (phi2 + new_sigma * new_sigma).sqrt();
    let new_phi = T::one() / (T::one() / (phi_star * phi_star) + T::one() / v).sqrt();
    let new_mu = mu + new_phi * new_phi * improvement;
    Ok(GlickoState::new(
        new_mu * scale + T::lit(INITIAL_RATING),
        new_phi * scale,
        new_sigma,
    ))
}
