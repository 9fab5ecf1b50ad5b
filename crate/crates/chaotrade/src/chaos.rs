//! The coupled logistic map ("Logistic Bimap") that drives agent selection,
//! plus orbit diagnostics: occupancy asymmetry and a power spectrum.
//!
//! The map couples two logistic maps multiplicatively on the unit square:
//!
//! ```text
//! x' = lambda_a (3y + 1) x (1 - x)
//! y' = lambda_b (3x + 1) y (1 - y)
//! ```
//!
//! Both coordinates update simultaneously from the previous state. For
//! control parameters inside [`CHAOTIC_WINDOW`] the map carries a chaotic
//! attractor; the attractor is symmetric about the diagonal when
//! `lambda_a == lambda_b` and widens into the `y > x` half as `lambda_b`
//! grows past `lambda_a`. That occupancy asymmetry is the knob the market
//! uses to bias winner selection.

use thiserror::Error;

/// Parameter interval that holds the chaotic attractor, widened at the top
/// so the largest default sweep value (1.08429) counts as in-window.
pub const CHAOTIC_WINDOW: (f64, f64) = (1.032, 1.08429);

/// Default orbit start used when a caller does not configure one. An
/// interior point off the diagonal: starts on the diagonal never leave it.
pub const DEFAULT_START: (f64, f64) = (0.3, 0.6);

/// Default number of transient iterates discarded before an orbit is used.
pub const DEFAULT_DISCARD: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChaosError {
    #[error(
        "map parameters must be finite and positive, got lambda_a={lambda_a}, lambda_b={lambda_b}"
    )]
    InvalidParams { lambda_a: f64, lambda_b: f64 },
    #[error("state ({x}, {y}) lies outside the unit square")]
    InvalidState { x: f64, y: f64 },
    #[error(
        "map image ({x}, {y}) left the unit square (params in chaotic window: {in_window}; \
         numeric defect or escaping orbit)"
    )]
    RangeViolation { x: f64, y: f64, in_window: bool },
    #[error("orbit must contain at least one point")]
    EmptyOrbit,
    #[error("iterate needs n >= 1")]
    ZeroIterations,
    #[error("spectrum window must be a power of two >= 8, got {window}")]
    InvalidWindow { window: usize },
    #[error("series of length {len} is shorter than the spectrum window {window}")]
    SeriesTooShort { len: usize, window: usize },
}

/// Control parameters of the bimap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    lambda_a: f64,
    lambda_b: f64,
    in_chaotic_window: bool,
}

impl MapParams {
    /// Validates that both parameters are finite and positive. Values outside
    /// [`CHAOTIC_WINDOW`] are accepted but flagged, so exploratory sweeps can
    /// warn instead of fail.
    pub fn new(lambda_a: f64, lambda_b: f64) -> Result<Self, ChaosError> {
        if !(lambda_a.is_finite() && lambda_a > 0.0 && lambda_b.is_finite() && lambda_b > 0.0) {
            return Err(ChaosError::InvalidParams { lambda_a, lambda_b });
        }
        let (lo, hi) = CHAOTIC_WINDOW;
        let in_window = |l: f64| (lo..=hi).contains(&l);
        Ok(MapParams {
            lambda_a,
            lambda_b,
            in_chaotic_window: in_window(lambda_a) && in_window(lambda_b),
        })
    }

    pub fn lambda_a(&self) -> f64 {
        self.lambda_a
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }

    /// True iff both parameters lie inside [`CHAOTIC_WINDOW`].
    pub fn in_chaotic_window(&self) -> bool {
        self.in_chaotic_window
    }
}

/// A point of the map's orbit, kept inside the unit square by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaoticState {
    x: f64,
    y: f64,
}

impl ChaoticState {
    pub fn new(x: f64, y: f64) -> Result<Self, ChaosError> {
        if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
            return Err(ChaosError::InvalidState { x, y });
        }
        Ok(ChaoticState { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// How an orbit splits between the two half-squares and the diagonal.
/// Counts partition the orbit exactly; fractions are derived views.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitStats {
    pub n_points: usize,
    pub n_x_gt_y: usize,
    pub n_y_gt_x: usize,
    pub n_diag: usize,
}

impl OrbitStats {
    pub fn frac_x_gt_y(&self) -> f64 {
        self.n_x_gt_y as f64 / self.n_points as f64
    }

    pub fn frac_y_gt_x(&self) -> f64 {
        self.n_y_gt_x as f64 / self.n_points as f64
    }

    pub fn frac_diag(&self) -> f64 {
        self.n_diag as f64 / self.n_points as f64
    }
}

/// One-sided magnitude spectrum of a real series.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Normalized frequencies k/window in cycles per iteration, k = 1..=window/2.
    pub freqs: Vec<f64>,
    /// 2/window-scaled DFT magnitudes (amplitude of the matching sinusoid).
    pub magnitudes: Vec<f64>,
}

impl Spectrum {
    /// Frequency and magnitude of the largest bin (first bin wins ties).
    pub fn peak(&self) -> (f64, f64) {
        let mut best = 0;
        for k in 1..self.magnitudes.len() {
            if self.magnitudes[k] > self.magnitudes[best] {
                best = k;
            }
        }
        (self.freqs[best], self.magnitudes[best])
    }
}

/// One application of the bimap. Both new coordinates derive from the old
/// state. Errors if the image leaves the unit square, which for in-window
/// parameters signals a numeric defect and for out-of-window parameters an
/// escaping orbit.
pub fn step(state: ChaoticState, params: MapParams) -> Result<ChaoticState, ChaosError> {
    let (x, y) = (state.x, state.y);
    let nx = params.lambda_a * (3.0 * y + 1.0) * x * (1.0 - x);
    let ny = params.lambda_b * (3.0 * x + 1.0) * y * (1.0 - y);
    if !((0.0..=1.0).contains(&nx) && (0.0..=1.0).contains(&ny)) {
        return Err(ChaosError::RangeViolation {
            x: nx,
            y: ny,
            in_window: params.in_chaotic_window,
        });
    }
    Ok(ChaoticState { x: nx, y: ny })
}

/// Applies `step` `discard + n` times from `start` and returns the last `n`
/// states in order. Deterministic for fixed inputs.
pub fn iterate(
    start: ChaoticState,
    params: MapParams,
    n: usize,
    discard: u64,
) -> Result<Vec<ChaoticState>, ChaosError> {
    if n == 0 {
        return Err(ChaosError::ZeroIterations);
    }
    let mut s = start;
    for _ in 0..discard {
        s = step(s, params)?;
    }
    let mut orbit = Vec::with_capacity(n);
    for _ in 0..n {
        s = step(s, params)?;
        orbit.push(s);
    }
    Ok(orbit)
}

/// Counts how often the orbit visits `x > y`, `y > x` and the exact diagonal.
pub fn occupancy_asymmetry(orbit: &[ChaoticState]) -> Result<OrbitStats, ChaosError> {
    if orbit.is_empty() {
        return Err(ChaosError::EmptyOrbit);
    }
    let mut n_x_gt_y = 0;
    let mut n_y_gt_x = 0;
    for p in orbit {
        if p.x > p.y {
            n_x_gt_y += 1;
        } else if p.y > p.x {
            n_y_gt_x += 1;
        }
    }
    Ok(OrbitStats {
        n_points: orbit.len(),
        n_x_gt_y,
        n_y_gt_x,
        n_diag: orbit.len() - n_x_gt_y - n_y_gt_x,
    })
}

/// Mean-removed discrete Fourier magnitude of the last `window_length`
/// samples, rectangular window. `window_length` must be a power of two so
/// bin `window/2` lands exactly on w = 0.5, where the period-two oscillation
/// of the symmetric attractor shows up.
pub fn power_spectrum(series: &[f64], window_length: usize) -> Result<Spectrum, ChaosError> {
    if window_length < 8 || !window_length.is_power_of_two() {
        return Err(ChaosError::InvalidWindow {
            window: window_length,
        });
    }
    if series.len() < window_length {
        return Err(ChaosError::SeriesTooShort {
            len: series.len(),
            window: window_length,
        });
    }
    let window = &series[series.len() - window_length..];
    let n = window_length as f64;
    let mean = window.iter().sum::<f64>() / n;

    let half = window_length / 2;
    let mut freqs = Vec::with_capacity(half);
    let mut magnitudes = Vec::with_capacity(half);
    for k in 1..=half {
        let base = -2.0 * std::f64::consts::PI * k as f64 / n;
        let mut re = 0.0;
        let mut im = 0.0;
        for (t, &v) in window.iter().enumerate() {
            let (sin, cos) = (base * t as f64).sin_cos();
            let d = v - mean;
            re += d * cos;
            im += d * sin;
        }
        freqs.push(k as f64 / n);
        magnitudes.push(2.0 / n * re.hypot(im));
    }
    Ok(Spectrum { freqs, magnitudes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(a: f64, b: f64) -> MapParams {
        MapParams::new(a, b).unwrap()
    }

    fn state(x: f64, y: f64) -> ChaoticState {
        ChaoticState::new(x, y).unwrap()
    }

    #[test]
    fn origin_is_a_fixed_point() {
        for (a, b) in [(1.032, 1.032), (1.032, 1.08429), (0.5, 2.0)] {
            let s = step(state(0.0, 0.0), params(a, b)).unwrap();
            assert_eq!((s.x(), s.y()), (0.0, 0.0));
        }
    }

    #[test]
    fn corner_collapses_to_origin() {
        let s = step(state(1.0, 0.0), params(1.032, 1.08429)).unwrap();
        assert_eq!((s.x(), s.y()), (0.0, 0.0));
    }

    #[test]
    fn center_step_matches_hand_evaluation() {
        // 1.032 * (3*0.5 + 1) * 0.5 * 0.5 = 0.645 in both coordinates.
        let s = step(state(0.5, 0.5), params(1.032, 1.032)).unwrap();
        assert!((s.x() - 0.645).abs() < 1e-12);
        assert!((s.y() - 0.645).abs() < 1e-12);
    }

    #[test]
    fn params_validate_and_flag_the_window() {
        assert!(MapParams::new(f64::NAN, 1.0).is_err());
        assert!(MapParams::new(1.0, -2.0).is_err());
        assert!(MapParams::new(1.0, 0.0).is_err());
        assert!(params(1.032, 1.08429).in_chaotic_window());
        assert!(!params(1.0, 1.05).in_chaotic_window());
        assert!(!params(1.05, 1.09).in_chaotic_window());
    }

    #[test]
    fn state_rejects_points_outside_the_unit_square() {
        assert!(ChaoticState::new(-0.1, 0.5).is_err());
        assert!(ChaoticState::new(0.5, 1.1).is_err());
        assert!(ChaoticState::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn step_reports_escape_from_the_square() {
        // Near the top edge the x-image exceeds 1 even for in-window params:
        // 1.032 * (3*0.99 + 1) * 0.25 > 1.
        let err = step(state(0.5, 0.99), params(1.032, 1.032)).unwrap_err();
        match err {
            ChaosError::RangeViolation { in_window, .. } => assert!(in_window),
            other => panic!("expected RangeViolation, got {other:?}"),
        }
    }

    #[test]
    fn iterate_keeps_the_fixed_point() {
        let orbit = iterate(state(0.0, 0.0), params(1.07, 1.05), 3, 5).unwrap();
        assert_eq!(orbit.len(), 3);
        for p in orbit {
            assert_eq!((p.x(), p.y()), (0.0, 0.0));
        }
    }

    #[test]
    fn iterate_single_step_matches_step() {
        let orbit = iterate(state(0.5, 0.5), params(1.032, 1.032), 1, 0).unwrap();
        assert_eq!(orbit.len(), 1);
        let direct = step(state(0.5, 0.5), params(1.032, 1.032)).unwrap();
        assert_eq!(orbit[0], direct);
    }

    #[test]
    fn iterate_rejects_empty_request() {
        assert_eq!(
            iterate(state(0.3, 0.6), params(1.032, 1.032), 0, 10).unwrap_err(),
            ChaosError::ZeroIterations
        );
    }

    #[test]
    fn long_orbit_from_default_start_stays_in_range() {
        let start = state(DEFAULT_START.0, DEFAULT_START.1);
        let orbit = iterate(start, params(1.032, 1.032), 1_000_000, DEFAULT_DISCARD).unwrap();
        assert!(orbit
            .iter()
            .all(|p| (0.0..=1.0).contains(&p.x()) && (0.0..=1.0).contains(&p.y())));
    }

    #[test]
    fn occupancy_counts_two_point_orbit() {
        let orbit = [state(0.2, 0.8), state(0.9, 0.1)];
        let stats = occupancy_asymmetry(&orbit).unwrap();
        assert_eq!(stats.frac_x_gt_y(), 0.5);
        assert_eq!(stats.frac_y_gt_x(), 0.5);
        assert_eq!(stats.n_diag, 0);
    }

    #[test]
    fn occupancy_counts_diagonal_point() {
        let stats = occupancy_asymmetry(&[state(0.5, 0.5)]).unwrap();
        assert_eq!(stats.frac_diag(), 1.0);
    }

    #[test]
    fn occupancy_rejects_empty_orbit() {
        assert_eq!(
            occupancy_asymmetry(&[]).unwrap_err(),
            ChaosError::EmptyOrbit
        );
    }

    #[test]
    fn symmetric_params_visit_both_halves_equally() {
        let start = state(DEFAULT_START.0, DEFAULT_START.1);
        let orbit = iterate(start, params(1.032, 1.032), 1_000_000, DEFAULT_DISCARD).unwrap();
        let stats = occupancy_asymmetry(&orbit).unwrap();
        assert_eq!(
            stats.n_x_gt_y + stats.n_y_gt_x + stats.n_diag,
            stats.n_points
        );
        assert!((stats.frac_x_gt_y() - stats.frac_y_gt_x()).abs() <= 0.01);
    }

    #[test]
    fn raising_lambda_b_widens_the_upper_half() {
        let start = state(DEFAULT_START.0, DEFAULT_START.1);
        let orbit = iterate(start, params(1.032, 1.08429), 1_000_000, DEFAULT_DISCARD).unwrap();
        let stats = occupancy_asymmetry(&orbit).unwrap();
        assert!(stats.frac_y_gt_x() > stats.frac_x_gt_y());
    }

    #[test]
    fn spectrum_of_constant_series_vanishes() {
        let series = vec![0.4; 64];
        let spec = power_spectrum(&series, 32).unwrap();
        assert!(spec.magnitudes.iter().all(|&m| m.abs() < 1e-12));
    }

    #[test]
    fn spectrum_of_alternating_series_peaks_at_half() {
        let series: Vec<f64> = (0..128)
            .map(|t| if t % 2 == 0 { 0.9 } else { 0.2 })
            .collect();
        let spec = power_spectrum(&series, 64).unwrap();
        let (w, mag) = spec.peak();
        assert_eq!(w, 0.5);
        // Amplitude of the +-0.35 square wave.
        assert!((mag - 0.7).abs() < 1e-9);
    }

    #[test]
    fn spectrum_of_symmetric_orbit_peaks_at_half() {
        let start = state(DEFAULT_START.0, DEFAULT_START.1);
        let orbit = iterate(start, params(1.032, 1.032), 4096, DEFAULT_DISCARD).unwrap();
        let xs: Vec<f64> = orbit.iter().map(|p| p.x()).collect();
        let spec = power_spectrum(&xs, 4096).unwrap();
        let (w, _) = spec.peak();
        assert_eq!(w, 0.5);
    }

    #[test]
    fn spectrum_validates_window_and_length() {
        let series = vec![0.0; 100];
        assert!(matches!(
            power_spectrum(&series, 48),
            Err(ChaosError::InvalidWindow { .. })
        ));
        assert!(matches!(
            power_spectrum(&series, 4),
            Err(ChaosError::InvalidWindow { .. })
        ));
        assert!(matches!(
            power_spectrum(&series, 128),
            Err(ChaosError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn spectrum_frequencies_are_strictly_increasing() {
        let series: Vec<f64> = (0..64).map(|t| (t as f64 * 0.37).sin()).collect();
        let spec = power_spectrum(&series, 64).unwrap();
        assert!(spec.freqs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*spec.freqs.last().unwrap(), 0.5);
        assert!(spec.magnitudes.iter().all(|m| m.is_finite() && *m >= 0.0));
    }

    proptest! {
        // Swapping coordinates and parameters together commutes with the map.
        #[test]
        fn exchange_symmetry(
            x in 0.0..=1.0f64,
            y in 0.0..=1.0f64,
            la in CHAOTIC_WINDOW.0..=CHAOTIC_WINDOW.1,
            lb in CHAOTIC_WINDOW.0..=CHAOTIC_WINDOW.1,
        ) {
            let forward = step(state(x, y), params(la, lb));
            let swapped = step(state(y, x), params(lb, la));
            match (forward, swapped) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.x().to_bits(), b.y().to_bits());
                    prop_assert_eq!(a.y().to_bits(), b.x().to_bits());
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "asymmetric outcome: {:?} vs {:?}", a, b),
            }
        }

        // Identical inputs produce bit-identical orbits, and every yielded
        // point respects the unit-square invariant (escapes surface as errors,
        // never as out-of-range states).
        #[test]
        fn orbits_are_deterministic_and_in_range(
            x in 0.0..=1.0f64,
            y in 0.0..=1.0f64,
            lb in CHAOTIC_WINDOW.0..=CHAOTIC_WINDOW.1,
            n in 1usize..200,
            discard in 0u64..50,
        ) {
            let p = params(1.032, lb);
            let a = iterate(state(x, y), p, n, discard);
            let b = iterate(state(x, y), p, n, discard);
            match (a, b) {
                (Ok(oa), Ok(ob)) => {
                    prop_assert_eq!(oa.len(), n);
                    for (pa, pb) in oa.iter().zip(&ob) {
                        prop_assert_eq!(pa.x().to_bits(), pb.x().to_bits());
                        prop_assert_eq!(pa.y().to_bits(), pb.y().to_bits());
                        prop_assert!((0.0..=1.0).contains(&pa.x()));
                        prop_assert!((0.0..=1.0).contains(&pa.y()));
                    }
                }
                (Err(ea), Err(eb)) => prop_assert_eq!(ea, eb),
                (a, b) => prop_assert!(false, "non-deterministic outcome: {:?} vs {:?}", a, b),
            }
        }
    }
}
