use super::MetricsError;
use crate::scalar::Scalar;

fn check_lengths<T>(times: &[T], budgets: &[T]) -> Result<(), MetricsError> {
    if times.is_empty() {
        return Err(MetricsError::EmptySample);
    }
    if times.len() != budgets.len() {
        return Err(MetricsError::LengthMismatch {
            what: "budgets",
            expected: times.len(),
            actual: budgets.len(),
        });
    }
    Ok(())
}

/// Fraction and number of runs with a finite hitting time.
pub fn success_rate<T: Scalar>(times: &[T]) -> Result<(T, usize), MetricsError> {
    if times.is_empty() {
        return Err(MetricsError::EmptySample);
    }
    let hits = times.iter().filter(|t| t.is_finite()).count();
    Ok((T::from_count(hits) / T::from_count(times.len()), hits))
}

/// Penalized average runtime: failures count as `c` times their run's
/// budget. PAR-1 is what the statistics tables call the mean.
pub fn par_c<T: Scalar>(times: &[T], budgets: &[T], c: T) -> Result<T, MetricsError> {
    check_lengths(times, budgets)?;
    if !(c >= T::one()) {
        return Err(MetricsError::InvalidPenalty(c.to_f64().unwrap_or(f64::NAN)));
    }
    let total = times
        .iter()
        .zip(budgets)
        .fold(T::zero(), |acc, (&t, &b)| acc + t.min(c * b));
    Ok(total / T::from_count(times.len()))
}

/// Expected running time of the restarted algorithm: total evaluations
/// spent (failures charged their budget) divided by the number of
/// successes. Infinite when no run succeeded.
pub fn ert<T: Scalar>(times: &[T], budgets: &[T]) -> Result<T, MetricsError> {
    check_lengths(times, budgets)?;
    let (_, hits) = success_rate(times)?;
    if hits == 0 {
        return Ok(T::infinity());
    }
    let spent = times
        .iter()
        .zip(budgets)
        .fold(T::zero(), |acc, (&t, &b)| acc + t.min(b));
    Ok(spent / T::from_count(hits))
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn success_examples() {
        let (rate, n) = success_rate(&[10.0, 20.0, INF]).unwrap();
        assert_eq!(n, 2);
        assert!((rate - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(success_rate(&[INF, INF]).unwrap(), (0.0, 0));
        assert_eq!(success_rate(&[1.0, 1.0, 1.0, 1.0]).unwrap(), (1.0, 4));
        assert_eq!(success_rate::<f64>(&[]), Err(MetricsError::EmptySample));
    }

    #[test]
    fn par_examples() {
        let t = [10.0, 20.0, INF];
        let b = [100.0; 3];
        assert!((par_c(&t, &b, 1.0).unwrap() - 130.0 / 3.0).abs() < 1e-12);
        assert!((par_c(&t, &b, 2.0).unwrap() - 230.0 / 3.0).abs() < 1e-12);
        for c in [1.0, 3.0, 10.0] {
            assert_eq!(par_c(&[5.0, 5.0], &[100.0, 100.0], c).unwrap(), 5.0);
        }
        assert_eq!(par_c(&t, &b, 0.5), Err(MetricsError::InvalidPenalty(0.5)));
    }

    #[test]
    fn ert_examples() {
        assert_eq!(ert(&[10.0, 20.0, INF], &[100.0; 3]).unwrap(), 65.0);
        assert_eq!(ert(&[INF, INF], &[100.0; 2]).unwrap(), INF);
        assert_eq!(ert(&[7.0], &[100.0]).unwrap(), 7.0);
        assert!(matches!(
            ert(&[1.0], &[1.0, 2.0]),
            Err(MetricsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn generic_over_f32() {
        assert_eq!(ert(&[10.0f32, 20.0, f32::INFINITY], &[100.0f32; 3]).unwrap(), 65.0f32);
    }
}
