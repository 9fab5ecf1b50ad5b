//! Deterministic gas-like trading markets driven by a chaotic map.
//!
//! A closed community of `N` agents starts with equal money `m0`. Each
//! transaction, a two-dimensional coupled logistic map advances one step and
//! its orbit point selects an ordered agent pair `(i, j)`; a seeded uniform
//! draw fixes the exchange fraction and `delta_m = upsilon (m_i + m_j) / 2`
//! moves from `i` to `j` unless `i` cannot cover it. Money is conserved
//! exactly, and everything — map orbit, pair choices, exchange fractions —
//! is reproducible from the configuration alone.
//!
//! With symmetric map parameters the pairing is statistically even-handed
//! and the stationary money distribution is the exponential (Boltzmann-Gibbs)
//! law. Raising `lambda_b` above `lambda_a` skews which agents get the
//! winner role, and the wealth distribution crosses over to heavy Pareto
//! tails: a small chaotically favored cohort ends up holding nearly all the
//! money.
//!
//! Module map:
//!
//! - [`chaos`] — the coupled logistic map, orbit generation, occupancy
//!   asymmetry and a diagnostic power spectrum.
//! - [`market`] — the ledger, pair selection, the exchange rule and the
//!   simulation loop.
//! - [`stats`] — CCDFs, histograms, exponential/Pareto fits, class
//!   breakdowns and win/loss ranking profiles.
//! - [`runner`] — configuration documents, per-case artifact directories,
//!   parallel sweeps and map diagnostics. The `chaotrade` binary is a thin
//!   shell over this module.
//!
//! ```
//! use chaotrade::{chaos, market, stats};
//!
//! let params = chaos::MapParams::new(1.032, 1.032)?;
//! let start = chaos::ChaoticState::new(0.3, 0.6)?;
//! let config = market::MarketConfig::new(50, 1000.0)?;
//! let sim = market::run_simulation(&config, params, start, 1000, 5_000, 7)?;
//!
//! // Money is conserved no matter what the map did.
//! assert!(sim.summary.conservation_rel_error <= market::CONSERVATION_REL_TOL);
//!
//! let active: Vec<usize> = (0..50)
//!     .filter(|&a| sim.activity.executed_as_i()[a] + sim.activity.executed_as_j()[a] > 0)
//!     .collect();
//! let ccdf = stats::ccdf(sim.ledger.balances(), &active)?;
//! assert_eq!(ccdf.prob_geq[0], 1.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod chaos;
pub mod market;
mod numeric;
pub mod runner;
pub mod stats;

pub use chaos::{ChaosError, ChaoticState, MapParams, OrbitStats, Spectrum};
pub use market::{
    AgentActivity, AgentPair, Ledger, MarketConfig, MarketError, RunSummary, SimResult, TradeRecord,
};
pub use runner::{ExperimentConfig, Preset, RunnerError, SweepSpec};
pub use stats::{Ccdf, ClassBounds, ClassBreakdown, FitResult, StatsError, WinLossProfile};
