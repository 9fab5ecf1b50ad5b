//! Orchestration: turn a configuration into a finished run directory, fan a
//! sweep out over a worker pool, and dump map diagnostics.
//!
//! Every case writes into its own `<output_dir>/<case_id>/` directory:
//! `metadata.kv`, `balances.csv`, `activity.csv`, `ccdf.csv`, `classes.csv`,
//! `fits.csv`, `winloss.csv` and optionally `trace.csv`. A sweep adds
//! `<output_dir>/summary.csv` with one row per case. Identical
//! configurations reproduce every file byte for byte, regardless of where
//! the output lands or how many workers run the sweep.

mod config;
mod files;

pub use config::{
    load_config, load_config_with, load_sweep, load_sweep_with, ConfigError, ExperimentConfig,
    Overrides, Preset, SweepCase, SweepSpec, DEFAULT_SWEEP_LAMBDA_B, TRACE_DEFAULT_MAX_STEPS,
};

use crate::chaos::{self, ChaosError, ChaoticState, MapParams, OrbitStats, Spectrum};
use crate::market::{self, MarketConfig, MarketError, RunSummary, SimResult};
use crate::stats::{self, ClassBreakdown, FitResult, StatsError};

use rayon::prelude::*;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Window length for the diagnostic spectrum of `x_t`.
pub const SPECTRUM_WINDOW: usize = 4096;

/// Minimum attractor cloud size.
pub const DIAGNOSTICS_MIN_POINTS: usize = 2000;

/// Occupancy statistics use at least this many orbit points.
const OCCUPANCY_ORBIT_LEN: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Chaos(#[from] ChaosError),
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("attractor diagnostics need at least {DIAGNOSTICS_MIN_POINTS} points, got {0}")]
    TooFewDiagnosticPoints(usize),
    #[error("parallelism must be at least 1")]
    ZeroParallelism,
    #[error("could not build worker pool: {0}")]
    WorkerPool(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunnerError + '_ {
    move |source| RunnerError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Manifest of one finished case, with the headline numbers kept in memory
/// so sweeps can tabulate without re-reading files.
#[derive(Debug)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub metadata_path: PathBuf,
    pub balances_path: PathBuf,
    pub activity_path: PathBuf,
    pub ccdf_path: PathBuf,
    pub classes_path: PathBuf,
    pub fits_path: PathBuf,
    pub winloss_path: PathBuf,
    pub trace_path: Option<PathBuf>,
    pub run_summary: RunSummary,
    pub breakdown: ClassBreakdown,
    pub fits: Vec<FitResult>,
    pub active_agents: usize,
    pub passive_agents: usize,
    pub never_selected: usize,
}

impl RunArtifacts {
    /// Every file this run produced.
    pub fn paths(&self) -> Vec<&Path> {
        let mut paths = vec![
            self.metadata_path.as_path(),
            self.balances_path.as_path(),
            self.activity_path.as_path(),
            self.ccdf_path.as_path(),
            self.classes_path.as_path(),
            self.fits_path.as_path(),
            self.winloss_path.as_path(),
        ];
        if let Some(trace) = &self.trace_path {
            paths.push(trace.as_path());
        }
        paths
    }
}

/// Runs one case end to end: simulate, analyze over the include set (active
/// agents unless `include_passive` is set), and persist all artifacts under
/// `<output_dir>/<case_id>/`.
pub fn run_case(config: &ExperimentConfig) -> Result<RunArtifacts, RunnerError> {
    let market = MarketConfig::new(config.n_agents, config.initial_money)?;
    let params = MapParams::new(config.lambda_a, config.lambda_b)?;
    let start =
        ChaoticState::new(config.map_start.0, config.map_start.1).map_err(RunnerError::Chaos)?;

    let dir = config.output_dir.join(&config.case_id);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;

    let trace_path = config.emit_trace.then(|| dir.join("trace.csv"));
    let sim: SimResult = match &trace_path {
        Some(path) => {
            let mut trace = files::TraceWriter::create(path).map_err(io_err(path))?;
            let sim = market::run_simulation_with(
                &market,
                params,
                start,
                config.map_discard,
                config.total_steps,
                config.rng_seed,
                |record| trace.record(record),
            )?;
            trace.finish().map_err(io_err(path))?;
            sim
        }
        None => market::run_simulation(
            &market,
            params,
            start,
            config.map_discard,
            config.total_steps,
            config.rng_seed,
        )?,
    };

    let passive = market::passive_agents(&sim.activity);
    let mut is_passive = vec![false; config.n_agents];
    for &agent in &passive.passive {
        is_passive[agent] = true;
    }
    let active: Vec<usize> = (0..config.n_agents).filter(|&a| !is_passive[a]).collect();
    let include: Vec<usize> = if config.include_passive {
        (0..config.n_agents).collect()
    } else {
        active.clone()
    };

    let balances = sim.ledger.balances();
    let ccdf = stats::ccdf(balances, &include)?;
    let breakdown = stats::classify(balances, &include, config.class_bounds)?;
    let profile = stats::winloss_profile(&sim.activity, balances)?;
    let fits = default_fits(&ccdf, config)?;

    let metadata_path = dir.join("metadata.kv");
    files::write_metadata(
        &metadata_path,
        config,
        &sim.summary,
        active.len(),
        passive.passive.len(),
        passive.never_selected,
    )
    .map_err(io_err(&metadata_path))?;

    let balances_path = dir.join("balances.csv");
    files::write_balances(&balances_path, balances).map_err(io_err(&balances_path))?;

    let activity_path = dir.join("activity.csv");
    files::write_activity(&activity_path, &sim.activity).map_err(io_err(&activity_path))?;

    let ccdf_path = dir.join("ccdf.csv");
    files::write_ccdf(&ccdf_path, &ccdf).map_err(io_err(&ccdf_path))?;

    let classes_path = dir.join("classes.csv");
    files::write_classes(&classes_path, &breakdown).map_err(io_err(&classes_path))?;

    let fits_path = dir.join("fits.csv");
    files::write_fits(&fits_path, &fits).map_err(io_err(&fits_path))?;

    let winloss_path = dir.join("winloss.csv");
    files::write_winloss(&winloss_path, &profile).map_err(io_err(&winloss_path))?;

    Ok(RunArtifacts {
        dir,
        metadata_path,
        balances_path,
        activity_path,
        ccdf_path,
        classes_path,
        fits_path,
        winloss_path,
        trace_path,
        run_summary: sim.summary,
        breakdown,
        fits,
        active_agents: active.len(),
        passive_agents: passive.passive.len(),
        never_selected: passive.never_selected,
    })
}

/// The two standard fits. The exponential runs over CCDF levels with
/// probability at least `exp_fit_min_prob`; the Pareto over the tail at or
/// above `pareto_threshold`. A fit that has too few points to attempt is
/// omitted rather than an error: small or degenerate markets legitimately
/// lack a tail.
fn default_fits(
    ccdf: &stats::Ccdf,
    config: &ExperimentConfig,
) -> Result<Vec<FitResult>, RunnerError> {
    let mut fits = Vec::new();

    let lo = ccdf.money_levels.first().copied();
    let hi = ccdf
        .money_levels
        .iter()
        .zip(&ccdf.prob_geq)
        .filter(|(_, &p)| p >= config.exp_fit_min_prob)
        .map(|(&m, _)| m)
        .fold(None, |acc: Option<f64>, m| {
            Some(acc.map_or(m, |a| a.max(m)))
        });
    if let (Some(lo), Some(hi)) = (lo, hi) {
        if lo < hi {
            match stats::fit_exponential(ccdf, (lo, hi)) {
                Ok(fit) => fits.push(fit),
                Err(StatsError::TooFewPoints { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }

    match stats::fit_pareto(ccdf, config.pareto_threshold) {
        Ok(fit) => fits.push(fit),
        Err(StatsError::TooFewPoints { .. }) => {}
        Err(e) => return Err(e.into()),
    }

    Ok(fits)
}

/// Headline numbers of one sweep case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseStats {
    pub active_agents: usize,
    pub passive_agents: usize,
    pub never_selected: usize,
    pub poor_money_share: f64,
    pub middle_money_share: f64,
    pub rich_money_share: f64,
    pub poor_population_share: f64,
    pub middle_population_share: f64,
    pub rich_population_share: f64,
}

impl From<&RunArtifacts> for CaseStats {
    fn from(artifacts: &RunArtifacts) -> Self {
        let b = &artifacts.breakdown;
        CaseStats {
            active_agents: artifacts.active_agents,
            passive_agents: artifacts.passive_agents,
            never_selected: artifacts.never_selected,
            poor_money_share: b.poor.money_share,
            middle_money_share: b.middle.money_share,
            rich_money_share: b.rich.money_share,
            poor_population_share: b.poor.population_share,
            middle_population_share: b.middle.population_share,
            rich_population_share: b.rich.population_share,
        }
    }
}

/// One row of the sweep summary; a failed case carries its error text and
/// never aborts sibling cases.
#[derive(Debug)]
pub struct CaseRow {
    pub case_id: String,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub outcome: Result<CaseStats, String>,
}

/// All sweep rows in spec order plus the path of `summary.csv`.
#[derive(Debug)]
pub struct SweepSummary {
    pub rows: Vec<CaseRow>,
    pub summary_path: PathBuf,
}

impl SweepSummary {
    pub fn failed_cases(&self) -> Vec<(&str, &str)> {
        self.rows
            .iter()
            .filter_map(|row| {
                row.outcome
                    .as_ref()
                    .err()
                    .map(|e| (row.case_id.as_str(), e.as_str()))
            })
            .collect()
    }
}

/// Runs every case of the sweep on a pool of `parallelism` workers. Cases
/// are independent and deterministic, so the summary does not depend on the
/// schedule; rows keep spec order.
pub fn run_sweep(spec: &SweepSpec, parallelism: usize) -> Result<SweepSummary, RunnerError> {
    if parallelism == 0 {
        return Err(RunnerError::ZeroParallelism);
    }
    fs::create_dir_all(&spec.base.output_dir).map_err(io_err(&spec.base.output_dir))?;

    let configs: Vec<ExperimentConfig> = spec.cases.iter().map(|c| spec.case_config(c)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| RunnerError::WorkerPool(e.to_string()))?;
    let results: Vec<Result<RunArtifacts, RunnerError>> =
        pool.install(|| configs.par_iter().map(run_case).collect());

    let rows: Vec<CaseRow> = configs
        .iter()
        .zip(results)
        .map(|(config, result)| CaseRow {
            case_id: config.case_id.clone(),
            lambda_a: config.lambda_a,
            lambda_b: config.lambda_b,
            outcome: result
                .as_ref()
                .map(CaseStats::from)
                .map_err(|e| e.to_string()),
        })
        .collect();

    let summary_path = spec.base.output_dir.join("summary.csv");
    files::write_sweep_summary(&summary_path, &rows).map_err(io_err(&summary_path))?;

    Ok(SweepSummary { rows, summary_path })
}

/// The data behind a map diagnostic: attractor cloud, `x_t` spectrum and
/// occupancy record.
#[derive(Debug)]
pub struct Diagnostics {
    pub attractor_path: PathBuf,
    pub spectrum_path: PathBuf,
    pub occupancy_path: PathBuf,
    pub occupancy: OrbitStats,
    pub spectrum: Spectrum,
}

/// Writes `attractor.csv` (`n` orbit points), `spectrum.csv` (of `x_t`,
/// window [`SPECTRUM_WINDOW`]) and `occupancy.kv` into `output_dir`. The
/// occupancy record uses at least 10^6 post-transient iterates.
pub fn emit_diagnostics(
    params: MapParams,
    start: ChaoticState,
    n: usize,
    discard: u64,
    output_dir: &Path,
) -> Result<Diagnostics, RunnerError> {
    if n < DIAGNOSTICS_MIN_POINTS {
        return Err(RunnerError::TooFewDiagnosticPoints(n));
    }
    fs::create_dir_all(output_dir).map_err(io_err(output_dir))?;

    let orbit = chaos::iterate(start, params, n.max(OCCUPANCY_ORBIT_LEN), discard)?;
    let xs: Vec<f64> = orbit.iter().map(|p| p.x()).collect();
    let spectrum = chaos::power_spectrum(&xs, SPECTRUM_WINDOW)?;
    let occupancy = chaos::occupancy_asymmetry(&orbit)?;

    let attractor_path = output_dir.join("attractor.csv");
    files::write_attractor(&attractor_path, &orbit[..n]).map_err(io_err(&attractor_path))?;

    let spectrum_path = output_dir.join("spectrum.csv");
    files::write_spectrum(&spectrum_path, &spectrum.freqs, &spectrum.magnitudes)
        .map_err(io_err(&spectrum_path))?;

    let occupancy_path = output_dir.join("occupancy.kv");
    files::write_occupancy(&occupancy_path, &occupancy).map_err(io_err(&occupancy_path))?;

    Ok(Diagnostics {
        attractor_path,
        spectrum_path,
        occupancy_path,
        occupancy,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::DEFAULT_START;

    fn small_config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            case_id: "small".to_string(),
            n_agents: 60,
            initial_money: 1000.0,
            total_steps: 7200,
            lambda_a: 1.032,
            lambda_b: 1.032,
            map_start: DEFAULT_START,
            map_discard: 1000,
            rng_seed: 11,
            class_bounds: Default::default(),
            exp_fit_min_prob: 0.01,
            pareto_threshold: 2000.0,
            include_passive: false,
            output_dir: dir.to_path_buf(),
            emit_trace: true,
        }
    }

    #[test]
    fn run_case_writes_every_manifest_file() {
        let tmp = tempfile::tempdir().unwrap();
        let artifacts = run_case(&small_config(tmp.path())).unwrap();
        for path in artifacts.paths() {
            let meta = fs::metadata(path).unwrap();
            assert!(meta.len() > 0, "{path:?} is empty");
        }
        assert!(artifacts.trace_path.is_some());
        assert_eq!(artifacts.active_agents + artifacts.passive_agents, 60);
    }

    #[test]
    fn rerunning_a_case_is_byte_identical() {
        let tmp = tempfile::tempdir().unwrap();
        let first = run_case(&small_config(&tmp.path().join("a"))).unwrap();
        let second = run_case(&small_config(&tmp.path().join("b"))).unwrap();
        for (x, y) in first.paths().iter().zip(second.paths()) {
            let a = fs::read(x).unwrap();
            let b = fs::read(y).unwrap();
            assert_eq!(a, b, "{x:?} differs from {y:?}");
        }
    }

    #[test]
    fn sweep_marks_failing_cases_without_aborting_siblings() {
        let tmp = tempfile::tempdir().unwrap();
        let base = small_config(tmp.path());
        let spec = SweepSpec {
            base,
            cases: vec![
                SweepCase {
                    case_id: "ok".to_string(),
                    lambda_b: 1.032,
                },
                // Far outside the window: the orbit escapes and the case fails.
                SweepCase {
                    case_id: "escapes".to_string(),
                    lambda_b: 3.9,
                },
            ],
        };
        let summary = run_sweep(&spec, 2).unwrap();
        assert!(summary.rows[0].outcome.is_ok());
        assert!(summary.rows[1].outcome.is_err());
        assert_eq!(summary.failed_cases().len(), 1);
        let text = fs::read_to_string(&summary.summary_path).unwrap();
        assert!(text.lines().count() == 3);
        assert!(text.contains("error:"));
    }

    #[test]
    fn sweep_rejects_zero_parallelism() {
        let tmp = tempfile::tempdir().unwrap();
        let spec = SweepSpec {
            base: small_config(tmp.path()),
            cases: vec![],
        };
        assert!(matches!(
            run_sweep(&spec, 0),
            Err(RunnerError::ZeroParallelism)
        ));
    }

    #[test]
    fn diagnostics_require_a_real_cloud() {
        let tmp = tempfile::tempdir().unwrap();
        let params = MapParams::new(1.032, 1.032).unwrap();
        let start = ChaoticState::new(DEFAULT_START.0, DEFAULT_START.1).unwrap();
        assert!(matches!(
            emit_diagnostics(params, start, 10, 100, tmp.path()),
            Err(RunnerError::TooFewDiagnosticPoints(10))
        ));
    }
}
