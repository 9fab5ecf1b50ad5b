//! Who wins and who loses: agents ranked by final wealth against their
//! selection tallies. In the symmetric market wins and losses spread evenly.
//! At maximum asymmetry a cohort at the top of the ranking never executes a
//! single losing transfer — the map simply stops handing them the loser
//! role with money on the table — while some poor agents "win" often yet
//! stay poor because their partners had nothing to give.
//!
//! ```bash
//! cargo run --release --example win_loss_ranking
//! ```

use chaotrade::chaos::{ChaoticState, MapParams, DEFAULT_DISCARD, DEFAULT_START};
use chaotrade::market::{passive_agents, run_simulation, MarketConfig, SimResult};
use chaotrade::stats::winloss_profile;

fn run(lambda_b: f64) -> Result<SimResult, Box<dyn std::error::Error>> {
    let n_agents = 500;
    let market = MarketConfig::new(n_agents, 1000.0)?;
    let params = MapParams::new(1.032, lambda_b)?;
    let start = ChaoticState::new(DEFAULT_START.0, DEFAULT_START.1)?;
    let total_steps = 2 * (n_agents as u64) * (n_agents as u64);
    Ok(run_simulation(
        &market,
        params,
        start,
        DEFAULT_DISCARD,
        total_steps,
        30,
    )?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, lambda_b) in [("symmetric", 1.032), ("asymmetric", 1.08429)] {
        let sim = run(lambda_b)?;
        let profile = winloss_profile(&sim.activity, sim.ledger.balances())?;

        println!("{label} (lambda_b = {lambda_b}):");
        println!("  rank  agent  money      losses  net_wins");
        for (rank, entry) in profile.entries.iter().take(8).enumerate() {
            println!(
                "  {:<5} {:<6} {:<10.1} {:<7} {:<8}",
                rank,
                entry.agent_index,
                sim.ledger.balance(entry.agent_index),
                entry.losses,
                entry.net_wins
            );
        }

        // Agents that traded but never lost an executed transfer.
        let activity = &sim.activity;
        let never_lose: Vec<usize> = (0..500)
            .filter(|&a| activity.executed_as_i()[a] == 0 && activity.executed_as_j()[a] > 0)
            .collect();
        let passive = passive_agents(&sim.activity);
        if never_lose.is_empty() {
            println!("  never-losing traders: none");
        } else {
            let ranks: Vec<usize> = profile
                .entries
                .iter()
                .enumerate()
                .filter(|(_, e)| never_lose.contains(&e.agent_index))
                .map(|(rank, _)| rank)
                .collect();
            println!(
                "  never-losing traders: {} agents, ranks {}..{}",
                never_lose.len(),
                ranks.iter().min().unwrap(),
                ranks.iter().max().unwrap()
            );
        }
        println!(
            "  passive agents (never moved money): {}",
            passive.passive.len()
        );
        println!();
    }
    Ok(())
}
