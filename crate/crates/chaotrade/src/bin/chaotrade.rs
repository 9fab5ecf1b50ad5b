//! Thin command-line shell over the library: `run` a single case, `sweep`
//! the case ladder, or `diagnose` the map itself. All heavy lifting lives in
//! `chaotrade::runner`.

use chaotrade::chaos::{ChaoticState, MapParams, DEFAULT_DISCARD, DEFAULT_START};
use chaotrade::runner::{
    self, Overrides, Preset, RunArtifacts, SweepSummary, DIAGNOSTICS_MIN_POINTS,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "chaotrade",
    version,
    about = "Chaotic-selection trading market simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    /// 500 agents, seconds per case.
    Desk,
    /// 5000 agents, 50 million transactions per case.
    Paper,
}

impl From<PresetArg> for Preset {
    fn from(arg: PresetArg) -> Preset {
        match arg {
            PresetArg::Desk => Preset::Desk,
            PresetArg::Paper => Preset::Paper,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a single market case from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scale preset supplying defaults for keys absent from the config.
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        /// Seed override for the exchange-fraction generator.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a sweep of cases from a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Number of worker threads for independent cases.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Emit map diagnostics: attractor cloud, x_t spectrum, occupancy record.
    Diagnose {
        #[arg(long)]
        lambda_a: f64,
        #[arg(long)]
        lambda_b: f64,
        /// Attractor cloud size (at least 2000).
        #[arg(long, default_value_t = DIAGNOSTICS_MIN_POINTS)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run {
            config,
            out,
            preset,
            seed,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("{}: {e}", config.display()))?;
            let overrides = Overrides {
                rng_seed: seed,
                output_dir: out,
            };
            let resolved = runner::load_config_with(&text, preset.map(Into::into), &overrides)?;
            warn_if_outside_window(resolved.lambda_a, resolved.lambda_b);
            let artifacts = runner::run_case(&resolved)?;
            print_case(&artifacts);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            parallel,
            out,
            preset,
            seed,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("{}: {e}", config.display()))?;
            let overrides = Overrides {
                rng_seed: seed,
                output_dir: out,
            };
            let spec = runner::load_sweep_with(&text, preset.map(Into::into), &overrides)?;
            warn_if_outside_window(
                spec.base.lambda_a,
                spec.cases
                    .iter()
                    .map(|c| c.lambda_b)
                    .fold(spec.base.lambda_a, f64::max),
            );
            let summary = runner::run_sweep(&spec, parallel)?;
            print_sweep(&summary);
            let failed = summary.failed_cases();
            if failed.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                for (case, error) in failed {
                    eprintln!("case {case} failed: {error}");
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Diagnose {
            lambda_a,
            lambda_b,
            points,
            out,
        } => {
            let params = MapParams::new(lambda_a, lambda_b)?;
            warn_if_outside_window(lambda_a, lambda_b);
            let start = ChaoticState::new(DEFAULT_START.0, DEFAULT_START.1)
                .expect("default start is valid");
            let diag = runner::emit_diagnostics(params, start, points, DEFAULT_DISCARD, &out)?;
            let occ = &diag.occupancy;
            let (peak_w, peak_mag) = diag.spectrum.peak();
            println!(
                "occupancy over {} points: x>y {:.4}, y>x {:.4}, diagonal {:.4}",
                occ.n_points,
                occ.frac_x_gt_y(),
                occ.frac_y_gt_x(),
                occ.frac_diag()
            );
            println!("spectrum peak: w = {peak_w} (magnitude {peak_mag:.4})");
            for path in [
                &diag.attractor_path,
                &diag.spectrum_path,
                &diag.occupancy_path,
            ] {
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn warn_if_outside_window(lambda_a: f64, lambda_b: f64) {
    if let Ok(params) = MapParams::new(lambda_a, lambda_b) {
        if !params.in_chaotic_window() {
            eprintln!(
                "warning: (lambda_a, lambda_b) = ({lambda_a}, {lambda_b}) lies outside the \
                 chaotic window {:?}; the orbit may leave the unit square",
                chaotrade::chaos::CHAOTIC_WINDOW
            );
        }
    }
}

fn print_case(artifacts: &RunArtifacts) {
    let s = &artifacts.run_summary;
    println!(
        "{} steps: {} executed, {} skipped (insufficient), {} skipped (self)",
        s.total_steps, s.executed, s.skipped_insufficient, s.skipped_self
    );
    println!(
        "conservation relative error: {:.3e}",
        s.conservation_rel_error
    );
    println!(
        "agents: {} active, {} passive ({} never selected)",
        artifacts.active_agents, artifacts.passive_agents, artifacts.never_selected
    );
    let b = &artifacts.breakdown;
    println!(
        "population shares  poor {:.4}  middle {:.4}  rich {:.4}",
        b.poor.population_share, b.middle.population_share, b.rich.population_share
    );
    println!(
        "money shares       poor {:.4}  middle {:.4}  rich {:.4}",
        b.poor.money_share, b.middle.money_share, b.rich.money_share
    );
    for fit in &artifacts.fits {
        if fit.valid {
            println!(
                "{} fit over [{:.1}, {:.1}]: parameter {:.4}, r^2 {:.4}",
                fit.model, fit.fit_range.0, fit.fit_range.1, fit.parameter, fit.r_squared
            );
        } else {
            println!(
                "{} fit over [{:.1}, {:.1}]: no decay (flagged invalid)",
                fit.model, fit.fit_range.0, fit.fit_range.1
            );
        }
    }
    println!("artifacts in {}", artifacts.dir.display());
}

fn print_sweep(summary: &SweepSummary) {
    println!(
        "{:<8} {:>9} {:>7} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "case",
        "lambda_b",
        "active",
        "passive",
        "poor$",
        "middle$",
        "rich$",
        "poorN",
        "middleN",
        "richN"
    );
    for row in &summary.rows {
        match &row.outcome {
            Ok(s) => println!(
                "{:<8} {:>9} {:>7} {:>8} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
                row.case_id,
                row.lambda_b,
                s.active_agents,
                s.passive_agents,
                s.poor_money_share,
                s.middle_money_share,
                s.rich_money_share,
                s.poor_population_share,
                s.middle_population_share,
                s.rich_population_share,
            ),
            Err(e) => println!("{:<8} {:>9} failed: {e}", row.case_id, row.lambda_b),
        }
    }
    println!("summary written to {}", summary.summary_path.display());
}
