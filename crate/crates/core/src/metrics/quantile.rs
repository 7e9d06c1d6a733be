use crate::scalar::Scalar;

/// Levels reported by statistics tables: 2%, 5%, 10%, 25%, 50%, 75%, 90%,
/// 95% and 98%.
pub const QUANTILE_LEVELS: [f64; 9] = [0.02, 0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.98];

/// Quantile of an ascending, non-empty sample by linear interpolation
/// between order statistics at `h = (n - 1) p` (zero-based), the "type 7"
/// estimator. `p` is clamped to `[0, 1]`.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], p: T) -> T {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let n = sorted.len();
    let p = p.max(T::zero()).min(T::one());
    let h = T::from_count(n - 1) * p;
    let lo = h.floor();
    let i = lo.to_usize().unwrap_or(0).min(n - 1);
    if i + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo;
    (sorted[i] + frac * (sorted[i + 1] - sorted[i])).min(sorted[i + 1])
}

/// Sorts a copy of `sample` and returns the quantile, or `None` if empty.
pub fn quantile<T: Scalar>(sample: &[T], p: T) -> Option<T> {
    if sample.is_empty() {
        return None;
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in sample"));
    Some(quantile_sorted(&sorted, p))
}
