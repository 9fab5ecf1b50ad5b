//! Turns final ledgers and activity tallies into observables: histograms,
//! complementary CDFs, exponential and Pareto tail fits, economic-class
//! breakdowns and win/loss ranking profiles.
//!
//! Conventions: the CCDF is `P(money >= m)` (greater *or equal*); class and
//! distribution statistics are computed over a caller-supplied include set,
//! normally the active agents. Fits are ordinary least squares on the
//! transformed coordinates — semilog for the exponential, log-log for the
//! Pareto — which is exactly what a straight line on those plots means.

use crate::market::AgentActivity;
use crate::numeric::neumaier_sum;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("include set is empty")]
    EmptyInclude,
    #[error("agent index {index} out of range for {len} balances")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("balance at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("histogram needs at least one bin")]
    ZeroBins,
    #[error("range ({lo}, {hi}) is not a finite increasing pair")]
    BadRange { lo: f64, hi: f64 },
    #[error("class bounds must satisfy 0 < poor_upper < middle_upper, got ({poor}, {middle})")]
    BadBounds { poor: f64, middle: f64 },
    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("tail threshold must be positive and finite, got {0}")]
    BadThreshold(f64),
    #[error("activity covers {activity} agents but {balances} balances were given")]
    LengthMismatch { activity: usize, balances: usize },
}

/// Equal-width histogram; values outside the range saturate into the end
/// bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Empirical complementary CDF: `prob_geq[k]` is the fraction of included
/// balances `>= money_levels[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccdf {
    pub money_levels: Vec<f64>,
    pub prob_geq: Vec<f64>,
}

/// Population/money split of one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassShare {
    pub population: usize,
    pub population_share: f64,
    pub money: f64,
    pub money_share: f64,
}

/// Poor / middle / rich partition boundaries: poor is `[0, poor_upper)`,
/// middle `[poor_upper, middle_upper)`, rich `[middle_upper, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassBounds {
    poor_upper: f64,
    middle_upper: f64,
}

impl ClassBounds {
    pub fn new(poor_upper: f64, middle_upper: f64) -> Result<Self, StatsError> {
        if !(poor_upper.is_finite()
            && middle_upper.is_finite()
            && 0.0 < poor_upper
            && poor_upper < middle_upper)
        {
            return Err(StatsError::BadBounds {
                poor: poor_upper,
                middle: middle_upper,
            });
        }
        Ok(ClassBounds {
            poor_upper,
            middle_upper,
        })
    }

    pub fn poor_upper(&self) -> f64 {
        self.poor_upper
    }

    pub fn middle_upper(&self) -> f64 {
        self.middle_upper
    }
}

impl Default for ClassBounds {
    /// $500 / $2000 in the default unit of 1000 starting money per agent.
    fn default() -> Self {
        ClassBounds {
            poor_upper: 500.0,
            middle_upper: 2000.0,
        }
    }
}

/// Class statistics over an include set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassBreakdown {
    pub bounds: ClassBounds,
    pub poor: ClassShare,
    pub middle: ClassShare,
    pub rich: ClassShare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Exponential,
    Pareto,
}

impl std::fmt::Display for FitModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitModel::Exponential => write!(f, "exponential"),
            FitModel::Pareto => write!(f, "pareto"),
        }
    }
}

/// Result of a straight-line fit. `parameter` is the effective temperature
/// for the exponential model and the tail exponent for the Pareto model.
/// A nonnegative regression slope means the data does not decay like the
/// model at all; the fit comes back with `valid = false` and a NaN
/// parameter instead of an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub parameter: f64,
    pub fit_range: (f64, f64),
    pub r_squared: f64,
    pub valid: bool,
}

/// One row of the wealth-ranked activity profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WinLossEntry {
    pub agent_index: usize,
    /// Times selected in the loser role.
    pub losses: u64,
    /// Times selected as winner minus times selected as loser.
    pub net_wins: i64,
}

/// Agents sorted by final money, richest first (ties by agent index
/// ascending, so profiles are bit-reproducible).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinLossProfile {
    pub entries: Vec<WinLossEntry>,
}

fn gather(balances: &[f64], include: &[usize]) -> Result<Vec<f64>, StatsError> {
    if include.is_empty() {
        return Err(StatsError::EmptyInclude);
    }
    let mut values = Vec::with_capacity(include.len());
    for &index in include {
        let v = *balances.get(index).ok_or(StatsError::IndexOutOfRange {
            index,
            len: balances.len(),
        })?;
        if !v.is_finite() {
            return Err(StatsError::NonFinite { index });
        }
        values.push(v);
    }
    Ok(values)
}

/// Counts the included balances into `n_bins` equal-width bins over
/// `[range.0, range.1)`; out-of-range values land in the nearest end bin.
pub fn histogram(
    balances: &[f64],
    include: &[usize],
    n_bins: usize,
    range: (f64, f64),
) -> Result<Histogram, StatsError> {
    if n_bins == 0 {
        return Err(StatsError::ZeroBins);
    }
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(StatsError::BadRange { lo, hi });
    }
    let values = gather(balances, include)?;
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    for v in values {
        let raw = ((v - lo) / width).floor();
        let bin = if raw < 0.0 {
            0
        } else {
            (raw as usize).min(n_bins - 1)
        };
        counts[bin] += 1;
    }
    let bin_edges = (0..=n_bins).map(|k| lo + k as f64 * width).collect();
    Ok(Histogram { bin_edges, counts })
}

/// Empirical `P(money >= m)` at every distinct included balance, exact from
/// sorted order: the first level (the sample minimum) always carries
/// probability 1.
pub fn ccdf(balances: &[f64], include: &[usize]) -> Result<Ccdf, StatsError> {
    let mut values = gather(balances, include)?;
    values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite by construction"));
    let n = values.len() as f64;
    let mut money_levels = Vec::new();
    let mut prob_geq = Vec::new();
    for (idx, &v) in values.iter().enumerate() {
        if idx == 0 || v != values[idx - 1] {
            money_levels.push(v);
            prob_geq.push((values.len() - idx) as f64 / n);
        }
    }
    Ok(Ccdf {
        money_levels,
        prob_geq,
    })
}

/// Splits the include set into poor/middle/rich by final money and returns
/// population and money shares of each class. Shares are relative to the
/// include set only. If the included money totals zero the money shares are
/// reported as zero.
pub fn classify(
    balances: &[f64],
    include: &[usize],
    bounds: ClassBounds,
) -> Result<ClassBreakdown, StatsError> {
    let values = gather(balances, include)?;
    let mut buckets: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for v in values {
        let class = if v < bounds.poor_upper {
            0
        } else if v < bounds.middle_upper {
            1
        } else {
            2
        };
        buckets[class].push(v);
    }
    let population_total = include.len() as f64;
    let money: Vec<f64> = buckets.iter().map(|b| neumaier_sum(b)).collect();
    let money_total = neumaier_sum(&money);
    let share = |class: usize| ClassShare {
        population: buckets[class].len(),
        population_share: buckets[class].len() as f64 / population_total,
        money: money[class],
        money_share: if money_total > 0.0 {
            money[class] / money_total
        } else {
            0.0
        },
    };
    Ok(ClassBreakdown {
        bounds,
        poor: share(0),
        middle: share(1),
        rich: share(2),
    })
}

/// Ordinary least squares of y on x. Returns (slope, r_squared).
fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let slope = sxy / sxx;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let fitted = y_mean + slope * (x - x_mean);
        ss_res += (y - fitted) * (y - fitted);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (slope, r_squared)
}

/// Fits `ln P(>=m) = -m / T_eff + c` over levels inside `fit_range`.
/// For a Boltzmann-Gibbs market `T_eff` matches the mean money of the
/// included agents.
pub fn fit_exponential(ccdf: &Ccdf, fit_range: (f64, f64)) -> Result<FitResult, StatsError> {
    let (lo, hi) = fit_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(StatsError::BadRange { lo, hi });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&m, &p) in ccdf.money_levels.iter().zip(&ccdf.prob_geq) {
        if (lo..=hi).contains(&m) && p > 0.0 {
            xs.push(m);
            ys.push(p.ln());
        }
    }
    if xs.len() < 3 {
        return Err(StatsError::TooFewPoints {
            needed: 3,
            got: xs.len(),
        });
    }
    let (slope, r_squared) = ols(&xs, &ys);
    let valid = slope < 0.0;
    Ok(FitResult {
        model: FitModel::Exponential,
        parameter: if valid { -1.0 / slope } else { f64::NAN },
        fit_range,
        r_squared,
        valid,
    })
}

/// Fits `ln P(>=m) = -alpha ln m + c` over levels at or above
/// `tail_threshold`. The recorded fit range runs from the threshold to the
/// largest level used.
pub fn fit_pareto(ccdf: &Ccdf, tail_threshold: f64) -> Result<FitResult, StatsError> {
    if !(tail_threshold.is_finite() && tail_threshold > 0.0) {
        return Err(StatsError::BadThreshold(tail_threshold));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut hi = tail_threshold;
    for (&m, &p) in ccdf.money_levels.iter().zip(&ccdf.prob_geq) {
        if m >= tail_threshold && p > 0.0 {
            xs.push(m.ln());
            ys.push(p.ln());
            hi = hi.max(m);
        }
    }
    if xs.len() < 3 {
        return Err(StatsError::TooFewPoints {
            needed: 3,
            got: xs.len(),
        });
    }
    let (slope, r_squared) = ols(&xs, &ys);
    let valid = slope < 0.0;
    Ok(FitResult {
        model: FitModel::Pareto,
        parameter: if valid { -slope } else { f64::NAN },
        fit_range: (tail_threshold, hi),
        r_squared,
        valid,
    })
}

/// Hill maximum-likelihood estimate of the Pareto tail exponent over sample
/// values strictly above `threshold`. Cross-check for [`fit_pareto`]; the
/// regression fit stays the authoritative number.
pub fn hill_exponent(values: &[f64], threshold: f64) -> Result<f64, StatsError> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(StatsError::BadThreshold(threshold));
    }
    let mut sum_log = 0.0;
    let mut k = 0usize;
    for &v in values {
        if v > threshold {
            sum_log += (v / threshold).ln();
            k += 1;
        }
    }
    if k < 3 {
        return Err(StatsError::TooFewPoints { needed: 3, got: k });
    }
    Ok(k as f64 / sum_log)
}

/// Ranks agents by final money (richest first, ties by index) and pairs each
/// rank with that agent's loss count and net wins.
pub fn winloss_profile(
    activity: &AgentActivity,
    balances: &[f64],
) -> Result<WinLossProfile, StatsError> {
    if activity.len() != balances.len() {
        return Err(StatsError::LengthMismatch {
            activity: activity.len(),
            balances: balances.len(),
        });
    }
    for (index, v) in balances.iter().enumerate() {
        if !v.is_finite() {
            return Err(StatsError::NonFinite { index });
        }
    }
    let mut order: Vec<usize> = (0..balances.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        balances[b]
            .partial_cmp(&balances[a])
            .expect("finite by construction")
            .then(a.cmp(&b))
    });
    let entries = order
        .into_iter()
        .map(|agent| WinLossEntry {
            agent_index: agent,
            losses: activity.times_i()[agent],
            net_wins: activity.times_j()[agent] as i64 - activity.times_i()[agent] as i64,
        })
        .collect();
    Ok(WinLossProfile { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::FractionRng;
    use proptest::prelude::*;

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn histogram_counts_into_equal_bins() {
        let h = histogram(&[0.0, 999.0, 1000.0], &all(3), 2, (0.0, 2000.0)).unwrap();
        assert_eq!(h.counts, vec![2, 1]);
        assert_eq!(h.bin_edges, vec![0.0, 1000.0, 2000.0]);
    }

    #[test]
    fn histogram_single_value_and_saturation() {
        let h = histogram(&[5.0], &[0], 4, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 1);
        assert_eq!(h.counts[3], 1);
        let h = histogram(&[-3.0, 0.5], &all(2), 2, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![1, 1]);
    }

    #[test]
    fn histogram_validates_inputs() {
        assert!(matches!(
            histogram(&[1.0], &[], 2, (0.0, 1.0)),
            Err(StatsError::EmptyInclude)
        ));
        assert!(matches!(
            histogram(&[1.0], &[0], 0, (0.0, 1.0)),
            Err(StatsError::ZeroBins)
        ));
        assert!(matches!(
            histogram(&[1.0], &[0], 2, (1.0, 1.0)),
            Err(StatsError::BadRange { .. })
        ));
    }

    #[test]
    fn ccdf_of_three_distinct_values() {
        let c = ccdf(&[1.0, 2.0, 3.0], &all(3)).unwrap();
        assert_eq!(c.money_levels, vec![1.0, 2.0, 3.0]);
        assert_eq!(c.prob_geq[0], 1.0);
        assert!((c.prob_geq[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.prob_geq[2] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ccdf_of_constant_sample_is_a_single_level() {
        let c = ccdf(&[7.0, 7.0, 7.0], &all(3)).unwrap();
        assert_eq!(c.money_levels, vec![7.0]);
        assert_eq!(c.prob_geq, vec![1.0]);
    }

    #[test]
    fn ccdf_of_synthetic_exponential_sample_is_loglinear() {
        // Inverse-CDF sample of mean 1000, fixed seed.
        let mut rng = FractionRng::seed_from(2024);
        let sample: Vec<f64> = (0..10_000)
            .map(|_| -1000.0 * (1.0 - crate::market::draw_fraction(&mut rng)).ln())
            .collect();
        let c = ccdf(&sample, &all(sample.len())).unwrap();
        let hi = c
            .money_levels
            .iter()
            .zip(&c.prob_geq)
            .filter(|(_, &p)| p >= 0.01)
            .map(|(&m, _)| m)
            .fold(0.0, f64::max);
        let fit = fit_exponential(&c, (0.0, hi)).unwrap();
        assert!(fit.valid);
        assert!(fit.r_squared >= 0.98, "r^2 {}", fit.r_squared);
        assert!(
            (fit.parameter - 1000.0).abs() <= 50.0,
            "T_eff {}",
            fit.parameter
        );
    }

    #[test]
    fn exponential_fit_recovers_analytic_input_exactly() {
        let money_levels: Vec<f64> = (0..=20).map(|k| 100.0 * k as f64).collect();
        let prob_geq: Vec<f64> = money_levels.iter().map(|m| (-m / 1000.0).exp()).collect();
        let c = Ccdf {
            money_levels,
            prob_geq,
        };
        let fit = fit_exponential(&c, (0.0, 2000.0)).unwrap();
        assert!(fit.valid);
        assert!((fit.parameter - 1000.0).abs() <= 1e-9);
        assert!(fit.r_squared >= 1.0 - 1e-12);
    }

    #[test]
    fn exponential_fit_flags_nondecaying_data() {
        let c = Ccdf {
            money_levels: vec![1.0, 2.0, 3.0, 4.0],
            prob_geq: vec![0.2, 0.4, 0.6, 0.8],
        };
        let fit = fit_exponential(&c, (0.0, 10.0)).unwrap();
        assert!(!fit.valid);
        assert!(fit.parameter.is_nan());
    }

    #[test]
    fn exponential_fit_needs_three_points() {
        let c = Ccdf {
            money_levels: vec![1.0, 2.0, 3.0],
            prob_geq: vec![1.0, 0.5, 0.25],
        };
        assert!(matches!(
            fit_exponential(&c, (0.0, 1.5)),
            Err(StatsError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn pareto_fit_recovers_analytic_input_exactly() {
        let money_levels: Vec<f64> = (0..10)
            .map(|k| 2000.0 * 10f64.powf(k as f64 / 9.0))
            .collect();
        let prob_geq: Vec<f64> = money_levels
            .iter()
            .map(|m| (m / 2000.0).powf(-1.5))
            .collect();
        let c = Ccdf {
            money_levels,
            prob_geq,
        };
        let fit = fit_pareto(&c, 2000.0).unwrap();
        assert!(fit.valid);
        assert!((fit.parameter - 1.5).abs() <= 1e-9);
        assert!(fit.r_squared >= 1.0 - 1e-12);
    }

    #[test]
    fn pareto_fit_recovers_synthetic_sample_within_ten_percent() {
        let mut rng = FractionRng::seed_from(77);
        let sample: Vec<f64> = (0..10_000)
            .map(|_| 2000.0 * (1.0 - crate::market::draw_fraction(&mut rng)).powf(-1.0 / 1.5))
            .collect();
        let c = ccdf(&sample, &all(sample.len())).unwrap();
        let fit = fit_pareto(&c, 2000.0).unwrap();
        assert!(fit.valid);
        assert!(
            (fit.parameter - 1.5).abs() <= 0.15,
            "exponent {}",
            fit.parameter
        );
        // Hill estimator agrees on the same sample.
        let hill = hill_exponent(&sample, 2000.0).unwrap();
        assert!((hill - 1.5).abs() <= 0.15, "hill {hill}");
        assert!((hill - fit.parameter).abs() <= 0.2);
    }

    #[test]
    fn pareto_fit_validates_threshold_and_points() {
        let c = Ccdf {
            money_levels: vec![1.0, 2.0],
            prob_geq: vec![1.0, 0.5],
        };
        assert!(matches!(
            fit_pareto(&c, 0.0),
            Err(StatsError::BadThreshold(_))
        ));
        assert!(matches!(
            fit_pareto(&c, 1.0),
            Err(StatsError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn classify_splits_population_and_money() {
        let b = classify(
            &[100.0, 600.0, 3000.0],
            &all(3),
            ClassBounds::new(500.0, 2000.0).unwrap(),
        )
        .unwrap();
        assert_eq!(
            (b.poor.population, b.middle.population, b.rich.population),
            (1, 1, 1)
        );
        assert!((b.poor.population_share - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.poor.money_share - 100.0 / 3700.0).abs() < 1e-15);
        assert!((b.middle.money_share - 600.0 / 3700.0).abs() < 1e-15);
        assert!((b.rich.money_share - 3000.0 / 3700.0).abs() < 1e-15);
    }

    #[test]
    fn classify_handles_all_poor() {
        let b = classify(&[1.0, 2.0], &all(2), ClassBounds::default()).unwrap();
        assert_eq!(b.poor.population_share, 1.0);
        assert_eq!(b.middle.population, 0);
        assert_eq!(b.rich.population, 0);
    }

    #[test]
    fn class_bounds_validate() {
        assert!(ClassBounds::new(0.0, 10.0).is_err());
        assert!(ClassBounds::new(10.0, 10.0).is_err());
        assert!(ClassBounds::new(20.0, 10.0).is_err());
        assert!(ClassBounds::new(f64::NAN, 10.0).is_err());
    }

    #[test]
    fn winloss_orders_by_wealth_then_index() {
        let mut activity = AgentActivity::new(2);
        // times_i = [3, 1], times_j = [1, 3] via replay.
        for (i, j, _t) in [(0, 1, 1), (0, 1, 2), (0, 1, 3), (1, 0, 4)] {
            activity.record(&crate::market::TradeRecord {
                t: 1,
                pair: crate::market::AgentPair { i, j },
                upsilon: 0.0,
                delta_m: 0.0,
                executed: true,
            });
        }
        let profile = winloss_profile(&activity, &[5.0, 10.0]).unwrap();
        assert_eq!(profile.entries[0].agent_index, 1);
        assert_eq!(profile.entries[0].net_wins, 2);
        assert_eq!(profile.entries[0].losses, 1);
        assert_eq!(profile.entries[1].agent_index, 0);
        assert_eq!(profile.entries[1].net_wins, -2);
        assert_eq!(profile.entries[1].losses, 3);
    }

    #[test]
    fn winloss_breaks_ties_by_index() {
        let activity = AgentActivity::new(3);
        let profile = winloss_profile(&activity, &[4.0, 4.0, 4.0]).unwrap();
        let order: Vec<usize> = profile.entries.iter().map(|e| e.agent_index).collect();
        assert_eq!(order, vec![0, 1, 2]);
    }

    #[test]
    fn winloss_rejects_length_mismatch() {
        let activity = AgentActivity::new(2);
        assert!(matches!(
            winloss_profile(&activity, &[1.0]),
            Err(StatsError::LengthMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn ccdf_is_nonincreasing_and_starts_at_one(
            balances in proptest::collection::vec(0.0..1e6f64, 1..200),
        ) {
            let c = ccdf(&balances, &all(balances.len())).unwrap();
            prop_assert_eq!(c.prob_geq[0], 1.0);
            prop_assert!(c.prob_geq.windows(2).all(|w| w[1] <= w[0]));
            prop_assert!(c.money_levels.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn histogram_mass_equals_include_count(
            balances in proptest::collection::vec(-10.0..3000.0f64, 1..100),
            n_bins in 1usize..30,
        ) {
            let h = histogram(&balances, &all(balances.len()), n_bins, (0.0, 2000.0)).unwrap();
            prop_assert_eq!(h.counts.iter().sum::<u64>(), balances.len() as u64);
        }

        #[test]
        fn class_shares_partition_to_one(
            balances in proptest::collection::vec(0.0..5000.0f64, 1..100),
        ) {
            let b = classify(&balances, &all(balances.len()), ClassBounds::default()).unwrap();
            let pop = b.poor.population_share + b.middle.population_share + b.rich.population_share;
            prop_assert!((pop - 1.0).abs() < 1e-9);
            let total = b.poor.money + b.middle.money + b.rich.money;
            if total > 0.0 {
                let money = b.poor.money_share + b.middle.money_share + b.rich.money_share;
                prop_assert!((money - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn classification_is_scale_equivariant(
            balances in proptest::collection::vec(0.0..5000.0f64, 1..60),
            scale in 0.01..100.0f64,
        ) {
            let bounds = ClassBounds::default();
            let scaled_bounds = ClassBounds::new(
                bounds.poor_upper() * scale,
                bounds.middle_upper() * scale,
            ).unwrap();
            let scaled: Vec<f64> = balances.iter().map(|b| b * scale).collect();
            let a = classify(&balances, &all(balances.len()), bounds).unwrap();
            let b = classify(&scaled, &all(scaled.len()), scaled_bounds).unwrap();
            for (x, y) in [(a.poor, b.poor), (a.middle, b.middle), (a.rich, b.rich)] {
                prop_assert_eq!(x.population, y.population);
                prop_assert!((x.money_share - y.money_share).abs() < 1e-9);
            }
        }
    }
}
