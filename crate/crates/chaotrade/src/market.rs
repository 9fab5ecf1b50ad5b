//! The trading engine: a fixed community of agents with equal starting
//! money, pair selection driven by the chaotic map, and a conservative
//! asymmetric exchange rule.
//!
//! Per transaction the map advances one step, the orbit point picks the pair
//! through `i = floor(x N)`, `j = floor(y N)`, a seeded uniform draw fixes
//! the exchange fraction, and `delta_m = upsilon (m_i + m_j) / 2` moves from
//! the loser `i` to the winner `j` unless `i` cannot cover it. Money is
//! conserved in every branch; the engine aborts if the ledger total ever
//! drifts past [`CONSERVATION_REL_TOL`].

use crate::chaos::{self, ChaosError, ChaoticState, MapParams};
use crate::numeric::neumaier_sum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Identity of the exchange-fraction generator, recorded in run metadata so
/// a run can be reproduced outside this crate.
pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.3); seed expanded via SeedableRng::seed_from_u64 (SplitMix64); \
     upsilon = 53-bit uniform f64 in [0,1) (rand Standard)";

/// Relative tolerance on |sum(balances) - N*m0| / (N*m0).
pub const CONSERVATION_REL_TOL: f64 = 1e-9;

/// Steps between in-run conservation checks (the total is also checked at
/// the end of every run).
const CONSERVATION_CHECK_INTERVAL: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum MarketError {
    #[error(transparent)]
    Chaos(#[from] ChaosError),
    #[error("a market needs at least two agents, got {0}")]
    TooFewAgents(usize),
    #[error("initial money must be positive and finite, got {0}")]
    InvalidInitialMoney(f64),
    #[error("agent index {index} out of range for {n_agents} agents")]
    AgentOutOfRange { index: usize, n_agents: usize },
    #[error("exchange fraction must lie in [0, 1], got {0}")]
    FractionOutOfRange(f64),
    #[error("total_steps must be at least 1")]
    ZeroSteps,
    #[error("money conservation violated at step {step}: relative error {rel_error:e}")]
    ConservationViolated { rel_error: f64, step: u64 },
}

/// Market size and endowment. `total_money` is fixed at construction and is
/// the conserved quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketConfig {
    n_agents: usize,
    initial_money: f64,
    total_money: f64,
}

impl MarketConfig {
    pub fn new(n_agents: usize, initial_money: f64) -> Result<Self, MarketError> {
        if n_agents < 2 {
            return Err(MarketError::TooFewAgents(n_agents));
        }
        if !(initial_money.is_finite() && initial_money > 0.0) {
            return Err(MarketError::InvalidInitialMoney(initial_money));
        }
        Ok(MarketConfig {
            n_agents,
            initial_money,
            total_money: n_agents as f64 * initial_money,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn initial_money(&self) -> f64 {
        self.initial_money
    }

    pub fn total_money(&self) -> f64 {
        self.total_money
    }
}

/// Per-agent balances. Balances never go negative; their compensated sum
/// stays within [`CONSERVATION_REL_TOL`] of the starting total.
#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    balances: Vec<f64>,
    expected_total: f64,
}

impl Ledger {
    fn with_uniform(config: &MarketConfig) -> Self {
        Ledger {
            balances: vec![config.initial_money; config.n_agents],
            expected_total: config.total_money,
        }
    }

    pub fn len(&self) -> usize {
        self.balances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balances.is_empty()
    }

    pub fn balances(&self) -> &[f64] {
        &self.balances
    }

    pub fn balance(&self, agent: usize) -> f64 {
        self.balances[agent]
    }

    pub fn expected_total(&self) -> f64 {
        self.expected_total
    }

    /// Compensated sum of all balances.
    pub fn total(&self) -> f64 {
        neumaier_sum(&self.balances)
    }

    /// |total - expected| / expected.
    pub fn conservation_error(&self) -> f64 {
        (self.total() - self.expected_total).abs() / self.expected_total
    }
}

/// An ordered selection: `i` plays the loser role, `j` the winner role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentPair {
    pub i: usize,
    pub j: usize,
}

/// Outcome of one transaction attempt. `delta_m` is always the amount the
/// rule asked for, computed on pre-trade balances; `executed` tells whether
/// it moved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeRecord {
    pub t: u64,
    pub pair: AgentPair,
    pub upsilon: f64,
    pub delta_m: f64,
    pub executed: bool,
}

/// Per-agent role and execution tallies across a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentActivity {
    times_i: Vec<u64>,
    times_j: Vec<u64>,
    executed_as_i: Vec<u64>,
    executed_as_j: Vec<u64>,
}

impl AgentActivity {
    pub fn new(n_agents: usize) -> Self {
        AgentActivity {
            times_i: vec![0; n_agents],
            times_j: vec![0; n_agents],
            executed_as_i: vec![0; n_agents],
            executed_as_j: vec![0; n_agents],
        }
    }

    pub fn len(&self) -> usize {
        self.times_i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_i.is_empty()
    }

    pub fn record(&mut self, trade: &TradeRecord) {
        self.times_i[trade.pair.i] += 1;
        self.times_j[trade.pair.j] += 1;
        if trade.executed {
            self.executed_as_i[trade.pair.i] += 1;
            self.executed_as_j[trade.pair.j] += 1;
        }
    }

    pub fn times_i(&self) -> &[u64] {
        &self.times_i
    }

    pub fn times_j(&self) -> &[u64] {
        &self.times_j
    }

    pub fn executed_as_i(&self) -> &[u64] {
        &self.executed_as_i
    }

    pub fn executed_as_j(&self) -> &[u64] {
        &self.executed_as_j
    }
}

/// Seeded source of exchange fractions. See [`RNG_ALGORITHM`] for the exact
/// stream identity.
#[derive(Debug, Clone)]
pub struct FractionRng {
    inner: ChaCha8Rng,
}

impl FractionRng {
    pub fn seed_from(seed: u64) -> Self {
        FractionRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

/// Uniform draw on [0, 1); successive calls advance the stream
/// deterministically.
pub fn draw_fraction(rng: &mut FractionRng) -> f64 {
    rng.inner.gen::<f64>()
}

/// Maps an orbit point to an agent pair: `i = floor(x N)`, `j = floor(y N)`,
/// clamped to `N - 1` when a coordinate is exactly 1. `i == j` is possible
/// and returned as-is.
pub fn select_agents(state: &ChaoticState, n_agents: usize) -> AgentPair {
    debug_assert!(n_agents >= 2);
    let cap = n_agents - 1;
    let scale = n_agents as f64;
    AgentPair {
        i: ((state.x() * scale) as usize).min(cap),
        j: ((state.y() * scale) as usize).min(cap),
    }
}

/// Attempts one transfer. Self-pairs and insufficient funds leave the ledger
/// untouched; otherwise `delta_m` moves from `i` to `j`. The total is
/// unchanged in every branch.
pub fn apply_trade(
    ledger: &mut Ledger,
    pair: AgentPair,
    upsilon: f64,
    t: u64,
) -> Result<TradeRecord, MarketError> {
    let n = ledger.len();
    for index in [pair.i, pair.j] {
        if index >= n {
            return Err(MarketError::AgentOutOfRange { index, n_agents: n });
        }
    }
    if !(0.0..=1.0).contains(&upsilon) {
        return Err(MarketError::FractionOutOfRange(upsilon));
    }

    let m_i = ledger.balances[pair.i];
    let m_j = ledger.balances[pair.j];
    let delta_m = upsilon * (m_i + m_j) / 2.0;

    let executed = pair.i != pair.j && m_i >= delta_m;
    if executed {
        ledger.balances[pair.i] -= delta_m;
        ledger.balances[pair.j] += delta_m;
        debug_assert!(ledger.balances[pair.i] >= 0.0);
    }

    Ok(TradeRecord {
        t,
        pair,
        upsilon,
        delta_m,
        executed,
    })
}

/// Aggregate counters of a completed run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub total_steps: u64,
    pub executed: u64,
    pub skipped_insufficient: u64,
    pub skipped_self: u64,
    /// Conservation error of the final ledger.
    pub conservation_rel_error: f64,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub ledger: Ledger,
    pub activity: AgentActivity,
    pub summary: RunSummary,
}

/// Runs the market. All balances start at `m0`; the map discards `discard`
/// transient iterates; then each of the `total_steps` transactions advances
/// the map, selects a pair, draws an exchange fraction (the draw happens on
/// every step, executed or not) and attempts the trade. Fully determined by
/// `(market, params, start, discard, total_steps, seed)`.
pub fn run_simulation(
    market: &MarketConfig,
    params: MapParams,
    start: ChaoticState,
    discard: u64,
    total_steps: u64,
    seed: u64,
) -> Result<SimResult, MarketError> {
    run_simulation_with(market, params, start, discard, total_steps, seed, |_| {})
}

/// [`run_simulation`] with a per-transaction observer, used for trace
/// emission. The observer sees every [`TradeRecord`] in step order.
pub fn run_simulation_with<F>(
    market: &MarketConfig,
    params: MapParams,
    start: ChaoticState,
    discard: u64,
    total_steps: u64,
    seed: u64,
    mut on_trade: F,
) -> Result<SimResult, MarketError>
where
    F: FnMut(&TradeRecord),
{
    if total_steps == 0 {
        return Err(MarketError::ZeroSteps);
    }

    let mut ledger = Ledger::with_uniform(market);
    let mut activity = AgentActivity::new(market.n_agents);
    let mut rng = FractionRng::seed_from(seed);

    let mut state = start;
    for _ in 0..discard {
        state = chaos::step(state, params)?;
    }

    let mut executed = 0u64;
    let mut skipped_insufficient = 0u64;
    let mut skipped_self = 0u64;

    for t in 1..=total_steps {
        state = chaos::step(state, params)?;
        let pair = select_agents(&state, market.n_agents);
        let upsilon = draw_fraction(&mut rng);
        let record = apply_trade(&mut ledger, pair, upsilon, t)?;
        activity.record(&record);
        if record.executed {
            executed += 1;
        } else if pair.i == pair.j {
            skipped_self += 1;
        } else {
            skipped_insufficient += 1;
        }
        on_trade(&record);

        if t % CONSERVATION_CHECK_INTERVAL == 0 {
            let rel_error = ledger.conservation_error();
            if rel_error > CONSERVATION_REL_TOL {
                return Err(MarketError::ConservationViolated { rel_error, step: t });
            }
        }
    }

    let conservation_rel_error = ledger.conservation_error();
    if conservation_rel_error > CONSERVATION_REL_TOL {
        return Err(MarketError::ConservationViolated {
            rel_error: conservation_rel_error,
            step: total_steps,
        });
    }

    Ok(SimResult {
        ledger,
        activity,
        summary: RunSummary {
            total_steps,
            executed,
            skipped_insufficient,
            skipped_self,
            conservation_rel_error,
        },
    })
}

/// Agents that never moved money, plus how many were never even selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassiveReport {
    /// Sorted indices of agents with no executed trade in either role.
    pub passive: Vec<usize>,
    /// Agents that never appeared in any pair (subset of `passive`).
    pub never_selected: usize,
}

/// Finds the agents whose balance cannot have moved: no executed trade in
/// either role. Selected-but-never-transferring agents count as passive.
pub fn passive_agents(activity: &AgentActivity) -> PassiveReport {
    let mut passive = Vec::new();
    let mut never_selected = 0;
    for a in 0..activity.len() {
        if activity.executed_as_i[a] + activity.executed_as_j[a] == 0 {
            passive.push(a);
            if activity.times_i[a] + activity.times_j[a] == 0 {
                never_selected += 1;
            }
        }
    }
    PassiveReport {
        passive,
        never_selected,
    }
}
