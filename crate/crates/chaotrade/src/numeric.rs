//! Small numeric helpers shared across modules.

/// Neumaier-compensated sum. Used wherever money totals feed an invariant
/// check, so the check itself does not drown in accumulation error.
pub(crate) fn neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_exactly_on_small_inputs() {
        assert_eq!(neumaier_sum(&[1.0, 2.0, 3.0]), 6.0);
        assert_eq!(neumaier_sum(&[]), 0.0);
    }

    #[test]
    fn recovers_cancellation_that_naive_sum_loses() {
        // 1.0 + 1e100 - 1e100 - tiny residuals: naive summation returns 0.
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(&xs), 2.0);
    }
}
