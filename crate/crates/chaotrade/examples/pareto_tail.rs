//! Tail behavior at maximum pairing asymmetry (lambda_b = 1.08429). The
//! active-agent CCDF is straight on log-log axes above the rich threshold —
//! a Pareto law — and is often better described by two power-law segments
//! with different slopes. Fits both segments by least squares and
//! cross-checks the single-tail exponent with the Hill estimator.
//!
//! ```bash
//! cargo run --release --example pareto_tail
//! ```

use chaotrade::chaos::{ChaoticState, MapParams, DEFAULT_DISCARD, DEFAULT_START};
use chaotrade::market::{passive_agents, run_simulation, MarketConfig};
use chaotrade::stats::{ccdf, fit_pareto, hill_exponent};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_agents = 500;
    let market = MarketConfig::new(n_agents, 1000.0)?;
    let params = MapParams::new(1.032, 1.08429)?;
    let start = ChaoticState::new(DEFAULT_START.0, DEFAULT_START.1)?;
    let total_steps = 2 * (n_agents as u64) * (n_agents as u64);

    let sim = run_simulation(&market, params, start, DEFAULT_DISCARD, total_steps, 30)?;
    let passive = passive_agents(&sim.activity);
    let active: Vec<usize> = (0..n_agents)
        .filter(|&a| !passive.passive.contains(&a))
        .collect();
    let c = ccdf(sim.ledger.balances(), &active)?;

    let top = c.money_levels.last().copied().unwrap_or(0.0);
    println!(
        "active agents: {}; richest balance: {:.0}; levels >= 2000: {}",
        active.len(),
        top,
        c.money_levels.iter().filter(|&&m| m >= 2000.0).count()
    );

    // Whole tail from the rich threshold up.
    let whole = fit_pareto(&c, 2000.0)?;
    println!(
        "single-segment fit, m >= 2000: exponent {:.3}, r^2 {:.4}",
        whole.parameter, whole.r_squared
    );

    // The tail usually kinks: fit the lower and upper segments separately,
    // splitting at the geometric midpoint of the tail range.
    let split = (2000.0f64 * top).sqrt();
    let lower: Vec<(f64, f64)> = c
        .money_levels
        .iter()
        .zip(&c.prob_geq)
        .filter(|(&m, _)| (2000.0..split).contains(&m))
        .map(|(&m, &p)| (m, p))
        .collect();
    let lower_ccdf = chaotrade::stats::Ccdf {
        money_levels: lower.iter().map(|&(m, _)| m).collect(),
        prob_geq: lower.iter().map(|&(_, p)| p).collect(),
    };
    match (fit_pareto(&lower_ccdf, 2000.0), fit_pareto(&c, split)) {
        (Ok(a), Ok(b)) => {
            println!(
                "two-segment fits: [2000, {split:.0}) exponent {:.3} (r^2 {:.4}); \
                 [{split:.0}, {top:.0}] exponent {:.3} (r^2 {:.4})",
                a.parameter, a.r_squared, b.parameter, b.r_squared
            );
        }
        _ => println!("two-segment fits: not enough tail levels at this scale"),
    }

    // Hill estimator as an independent route to the single-tail exponent.
    let balances: Vec<f64> = active.iter().map(|&a| sim.ledger.balance(a)).collect();
    let hill = hill_exponent(&balances, 2000.0)?;
    println!("Hill estimator over the same tail: exponent {hill:.3}");
    Ok(())
}
