use serde::Serialize;

use super::{quantile_sorted, MetricsError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinRule {
    FreedmanDiaconis,
    /// Used when the interquartile range is zero.
    Sturges,
}

/// Uniform-width histogram bins covering a sample's range.
#[derive(Debug, Clone, PartialEq)]
pub struct Bins<T> {
    pub width: T,
    /// `len() == bin count + 1`.
    pub edges: Vec<T>,
    pub rule: BinRule,
}

impl<T> Bins<T> {
    pub fn count(&self) -> usize {
        self.edges.len().saturating_sub(1)
    }
}

/// Kernel density estimate on a fixed support grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate<T> {
    pub support: Vec<T>,
    pub density: Vec<T>,
    pub bandwidth: T,
}

fn sorted_finite<T: Scalar>(sample: &[T]) -> Vec<T> {
    let mut v: Vec<T> = sample.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    v
}

fn iqr<T: Scalar>(sorted: &[T]) -> T {
    quantile_sorted(sorted, T::lit(0.75)) - quantile_sorted(sorted, T::lit(0.25))
}

/// Freedman-Diaconis bin width `2 IQR n^(-1/3)` over the finite values of
/// `sample`. A zero IQR falls back to Sturges' `ceil(log2 n) + 1` bins over
/// the range (or a single unit-width bin for a constant sample).
pub fn fd_bins<T: Scalar>(sample: &[T]) -> Result<Bins<T>, MetricsError> {
    let sorted = sorted_finite(sample);
    let n = sorted.len();
    if n == 0 {
        return Err(MetricsError::EmptySample);
    }
    let (min, max) = (sorted[0], sorted[n - 1]);
    let range = max - min;
    let spread = iqr(&sorted);
    let half = T::lit(0.5);

    let (width, rule) = if spread > T::zero() {
        (
            T::lit(2.0) * spread / T::from_count(n).cbrt(),
            BinRule::FreedmanDiaconis,
        )
    } else if range > T::zero() {
        let k = T::from_count(n).log2().ceil() + T::one();
        (range / k, BinRule::Sturges)
    } else {
        return Ok(Bins {
            width: T::one(),
            edges: vec![min - half, min + half],
            rule: BinRule::Sturges,
        });
    };

    let bins = ((range / width) - T::lit(1e-9)).ceil().max(T::one());
    let bins = bins.to_usize().unwrap_or(1);
    let edges = (0..=bins).map(|i| min + width * T::from_count(i)).collect();
    Ok(Bins { width, edges, rule })
}

/// Counts per bin; bins are half-open `[lo, hi)` except the last, which
/// also includes its upper edge. Values outside the edges are ignored.
pub fn histogram<T: Scalar>(sample: &[T], bins: &Bins<T>) -> Vec<usize> {
    let k = bins.count();
    let mut counts = vec![0; k];
    if k == 0 {
        return counts;
    }
    let (lo, hi) = (bins.edges[0], bins.edges[k]);
    for &x in sample.iter().filter(|x| x.is_finite()) {
        if x < lo || x > hi {
            continue;
        }
        let i = bins.edges[1..].partition_point(|&e| e <= x).min(k - 1);
        counts[i] += 1;
    }
    counts
}

/// Silverman's rule of thumb `0.9 min(sd, IQR / 1.34) n^(-1/5)`. A zero
/// spread falls back to the standard deviation, then the magnitude of the
/// first value, then 1.
pub fn silverman_bandwidth<T: Scalar>(sample: &[T]) -> Result<T, MetricsError> {
    let sorted = sorted_finite(sample);
    let n = sorted.len();
    if n < 2 {
        return Err(MetricsError::TooFewPoints(n));
    }
    let nf = T::from_count(n);
    let mean = sorted.iter().fold(T::zero(), |a, &b| a + b) / nf;
    let var = sorted.iter().fold(T::zero(), |a, &b| a + (b - mean) * (b - mean)) / T::from_count(n - 1);
    let sd = var.sqrt();
    let mut lo = sd.min(iqr(&sorted) / T::lit(1.34));
    if lo <= T::zero() {
        lo = sd;
    }
    if lo <= T::zero() {
        lo = sorted[0].abs();
    }
    if lo <= T::zero() {
        lo = T::one();
    }
    Ok(T::lit(0.9) * lo * nf.powf(T::lit(-0.2)))
}

/// Gaussian kernel density estimate of the finite values of `sample`,
/// evaluated on `support`, with Silverman's bandwidth.
pub fn kde<T: Scalar>(sample: &[T], support: &[T]) -> Result<DensityEstimate<T>, MetricsError> {
    let h = silverman_bandwidth(sample)?;
    let points = sorted_finite(sample);
    let norm = T::one() / (T::from_count(points.len()) * h * T::lit(std::f64::consts::TAU).sqrt());
    let half = T::lit(0.5);
    let density = support
        .iter()
        .map(|&x| {
            points.iter().fold(T::zero(), |acc, &xi| {
                let z = (x - xi) / h;
                acc + (-half * z * z).exp()
            }) * norm
        })
        .collect();
    Ok(DensityEstimate {
        support: support.to_vec(),
        density,
        bandwidth: h,
    })
}

/// [`kde`] on `points` evenly spaced values spanning the data plus three
/// bandwidths on each side.
pub fn kde_auto<T: Scalar>(sample: &[T], points: usize) -> Result<DensityEstimate<T>, MetricsError> {
    let h = silverman_bandwidth(sample)?;
    let sorted = sorted_finite(sample);
    let pad = T::lit(3.0) * h;
    let (lo, hi) = (sorted[0] - pad, sorted[sorted.len() - 1] + pad);
    let points = points.max(2);
    let step = (hi - lo) / T::from_count(points - 1);
    let support: Vec<T> = (0..points).map(|i| lo + step * T::from_count(i)).collect();
    kde(sample, &support)
}
