//! Full-scale run: 5000 agents, 50 million transactions (T = 2 N^2) for one
//! choice of lambda_b. Expect tens of seconds per case in release mode; a
//! throughput figure is printed at the end.
//!
//! ```bash
//! cargo run --release --example paper_scale [lambda_b] [out_dir]
//! ```

use chaotrade::runner::{load_config_with, run_case, Overrides, Preset};
use std::path::PathBuf;
use std::time::Instant;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda_b: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1.08429);
    let out: PathBuf = std::env::args()
        .nth(2)
        .unwrap_or_else(|| "out/paper_scale".to_string())
        .into();

    let text = format!("case_id: full\nlambda_a: 1.032\nlambda_b: {lambda_b}\nrng_seed: 30\n");
    let config = load_config_with(
        &text,
        Some(Preset::Paper),
        &Overrides {
            rng_seed: None,
            output_dir: Some(out),
        },
    )?;
    println!(
        "running N = {}, T = {} at lambda_b = {lambda_b}...",
        config.n_agents, config.total_steps
    );

    let started = Instant::now();
    let artifacts = run_case(&config)?;
    let elapsed = started.elapsed();

    let s = &artifacts.run_summary;
    println!(
        "done in {:.1} s — {:.1} million transactions/s",
        elapsed.as_secs_f64(),
        s.total_steps as f64 / elapsed.as_secs_f64() / 1e6
    );
    println!(
        "executed {} | skipped {} insufficient, {} self | conservation {:.2e}",
        s.executed, s.skipped_insufficient, s.skipped_self, s.conservation_rel_error
    );
    println!(
        "agents: {} active, {} passive ({} never selected)",
        artifacts.active_agents, artifacts.passive_agents, artifacts.never_selected
    );
    let b = &artifacts.breakdown;
    println!(
        "money shares  poor {:.4}  middle {:.4}  rich {:.4}",
        b.poor.money_share, b.middle.money_share, b.rich.money_share
    );
    println!(
        "population    poor {:.4}  middle {:.4}  rich {:.4}",
        b.poor.population_share, b.middle.population_share, b.rich.population_share
    );
    for fit in &artifacts.fits {
        println!(
            "{} fit over [{:.0}, {:.0}]: parameter {:.4}, r^2 {:.4}, valid {}",
            fit.model, fit.fit_range.0, fit.fit_range.1, fit.parameter, fit.r_squared, fit.valid
        );
    }
    println!("artifacts in {}", artifacts.dir.display());
    Ok(())
}
