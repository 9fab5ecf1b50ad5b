//! The symmetric baseline: 500 agents, lambda_a = lambda_b = 1.032, half a
//! million transactions. Shows the two signatures of the even-handed market:
//! a spike of untouched agents at the starting money, and an exponential
//! (Boltzmann-Gibbs) wealth distribution among the agents that actually
//! traded, with effective temperature equal to their mean money.
//!
//! ```bash
//! cargo run --release --example symmetric_market
//! ```

use chaotrade::chaos::{ChaoticState, MapParams, DEFAULT_DISCARD, DEFAULT_START};
use chaotrade::market::{passive_agents, run_simulation, MarketConfig};
use chaotrade::stats::{ccdf, fit_exponential, histogram};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_agents = 500;
    let market = MarketConfig::new(n_agents, 1000.0)?;
    let params = MapParams::new(1.032, 1.032)?;
    let start = ChaoticState::new(DEFAULT_START.0, DEFAULT_START.1)?;
    let total_steps = 2 * (n_agents as u64) * (n_agents as u64);

    let sim = run_simulation(&market, params, start, DEFAULT_DISCARD, total_steps, 30)?;
    println!(
        "{} steps: {} executed, {} skipped (insufficient funds), {} skipped (self pair)",
        total_steps,
        sim.summary.executed,
        sim.summary.skipped_insufficient,
        sim.summary.skipped_self
    );
    println!(
        "conservation relative error: {:.2e}",
        sim.summary.conservation_rel_error
    );

    let passive = passive_agents(&sim.activity);
    println!(
        "passive agents: {} ({} never selected) — their money never moved",
        passive.passive.len(),
        passive.never_selected
    );

    // Wealth histogram over everyone: the passive agents pile up in the bin
    // holding the initial money.
    let everyone: Vec<usize> = (0..n_agents).collect();
    let hist = histogram(sim.ledger.balances(), &everyone, 50, (0.0, 2000.0))?;
    let spike = 25; // bin [1000, 1040)
    println!(
        "histogram bins around m0 = 1000: [{}] {} [{}] — the spike is the passive cohort",
        hist.counts[spike - 1],
        hist.counts[spike],
        hist.counts[spike + 1]
    );

    // Distribution of the agents that actually traded.
    let active: Vec<usize> = (0..n_agents)
        .filter(|&a| !passive.passive.contains(&a))
        .collect();
    let mean = active.iter().map(|&a| sim.ledger.balance(a)).sum::<f64>() / active.len() as f64;
    let c = ccdf(sim.ledger.balances(), &active)?;
    let hi = c
        .money_levels
        .iter()
        .zip(&c.prob_geq)
        .filter(|(_, &p)| p >= 0.01)
        .map(|(&m, _)| m)
        .fold(0.0, f64::max);
    let fit = fit_exponential(&c, (c.money_levels[0], hi))?;
    println!(
        "exponential fit over P >= 0.01: T_eff = {:.1}, r^2 = {:.4}",
        fit.parameter, fit.r_squared
    );
    println!(
        "active-agent mean money = {:.1}; T_eff/mean = {:.4} (equipartition)",
        mean,
        fit.parameter / mean
    );
    Ok(())
}
