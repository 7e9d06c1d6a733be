use super::ComparisonError;
use crate::scalar::Scalar;

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
///
/// Infinite entries (failed runs) sort above every finite value and are
/// equal to each other. NaN entries are rejected.
pub fn ks_two_sample<T: Scalar>(a: &[T], b: &[T]) -> Result<(T, T), ComparisonError> {
    let d = ks_statistic(a, b)?;
    let (na, nb) = (T::from_count(a.len()), T::from_count(b.len()));
    let ne = na * nb / (na + nb);
    let root = ne.sqrt();
    let lambda = (root + T::lit(0.12) + T::lit(0.11) / root) * d;
    Ok((d, kolmogorov_tail(lambda)))
}

/// Largest absolute difference between the two empirical distribution
/// functions, evaluated at every sample point.
pub fn ks_statistic<T: Scalar>(a: &[T], b: &[T]) -> Result<T, ComparisonError> {
    if a.is_empty() || b.is_empty() {
        return Err(ComparisonError::EmptySample);
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(ComparisonError::NanInSample);
    }
    let sort = |s: &[T]| {
        let mut v = s.to_vec();
        v.sort_by(|x, y| x.partial_cmp(y).expect("NaN rejected above"));
        v
    };
    let (a, b) = (sort(a), sort(b));
    let (na, nb) = (T::from_count(a.len()), T::from_count(b.len()));
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        let gap = (T::from_count(i) / na - T::from_count(j) / nb).abs();
        d = d.max(gap);
    }
    Ok(d)
}

/// Survival function of the Kolmogorov distribution,
/// `Q(λ) = 2 Σ_{k≥1} (-1)^(k-1) exp(-2 k² λ²)`, summed until terms drop
/// below 1e-10. For small `λ` the alternating series converges slowly, so
/// the equivalent theta-function form
/// `1 - (√(2π)/λ) Σ exp(-(2k-1)² π² / (8 λ²))` is used instead.
/// The result is clamped to `(0, 1]`.
pub fn kolmogorov_tail<T: Scalar>(lambda: T) -> T {
    const TERM_TOLERANCE: f64 = 1e-10;
    const MAX_TERMS: usize = 200;
    if !(lambda > T::zero()) {
        return T::one();
    }
    let tol = T::lit(TERM_TOLERANCE);
    let q = if lambda < T::lit(1.18) {
        let pi2 = T::lit(std::f64::consts::PI * std::f64::consts::PI);
        let denom = T::lit(8.0) * lambda * lambda;
        let mut sum = T::zero();
        for k in 1..=MAX_TERMS {
            let m = T::from_count(2 * k - 1);
            let term = (-(m * m) * pi2 / denom).exp();
            sum = sum + term;
            if term < tol {
                break;
            }
        }
        T::one() - T::lit(std::f64::consts::TAU).sqrt() / lambda * sum
    } else {
        let mut sum = T::zero();
        let mut sign = T::one();
        for k in 1..=MAX_TERMS {
            let kf = T::from_count(k);
            let term = (T::lit(-2.0) * kf * kf * lambda * lambda).exp();
            sum = sum + sign * term;
            sign = -sign;
            if term < tol {
                break;
            }
        }
        T::lit(2.0) * sum
    };
    q.max(T::min_positive_value()).min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_samples() {
        let (d, p) = ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((d, p), (0.0, 1.0));
    }

    #[test]
    fn disjoint_supports() {
        let (d, _) = ks_two_sample(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn interleaved() {
        let (d, _) = ks_two_sample::<f64>(&[1.0, 3.0, 5.0], &[2.0, 4.0, 6.0]).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn failures_sort_last() {
        let inf = f64::INFINITY;
        let (d, _) = ks_two_sample(&[1.0, inf], &[1.0, inf]).unwrap();
        assert_eq!(d, 0.0);
        let (d, _) = ks_two_sample(&[1.0, 2.0], &[inf, inf]).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn full_separation_small_p() {
        let a: Vec<f64> = (1..=20).map(f64::from).collect();
        let b: Vec<f64> = (101..=120).map(f64::from).collect();
        let (d, p) = ks_two_sample(&a, &b).unwrap();
        assert_eq!(d, 1.0);
        assert!(p < 1e-6 && p > 0.0);
    }

    #[test]
    fn tail_branches_agree() {
        for &l in &[1.0, 1.1, 1.17, 1.2, 1.3] {
            let theta = {
                let pi2 = std::f64::consts::PI.powi(2);
                let s: f64 = (1..50)
                    .map(|k| (-((2 * k - 1) as f64).powi(2) * pi2 / (8.0 * l * l)).exp())
                    .sum();
                1.0 - (std::f64::consts::TAU).sqrt() / l * s
            };
            let alt: f64 = 2.0
                * (1..200)
                    .map(|k| {
                        let k = k as f64;
                        (if k as i64 % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * k * k * l * l).exp()
                    })
                    .sum::<f64>();
            assert!((theta - alt).abs() < 1e-9);
            assert!((kolmogorov_tail(l) - alt).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_and_nan() {
        assert_eq!(ks_two_sample::<f64>(&[], &[1.0]), Err(ComparisonError::EmptySample));
        assert_eq!(ks_two_sample(&[f64::NAN], &[1.0]), Err(ComparisonError::NanInSample));
    }

    proptest! {
        #[test]
        fn symmetric_and_transform_invariant(
            a in prop::collection::vec(-100i32..100, 1..15),
            b in prop::collection::vec(-100i32..100, 1..15),
        ) {
            let fa: Vec<f64> = a.iter().map(|&x| x as f64).collect();
            let fb: Vec<f64> = b.iter().map(|&x| x as f64).collect();
            let d = ks_statistic(&fa, &fb).unwrap();
            prop_assert_eq!(d, ks_statistic(&fb, &fa).unwrap());
            let mut ra = fa.clone();
            ra.reverse();
            prop_assert_eq!(d, ks_statistic(&ra, &fb).unwrap());
            let ea: Vec<f64> = fa.iter().map(|x| (x / 50.0).exp()).collect();
            let eb: Vec<f64> = fb.iter().map(|x| (x / 50.0).exp()).collect();
            prop_assert_eq!(d, ks_statistic(&ea, &eb).unwrap());
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }
}
