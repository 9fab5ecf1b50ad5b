//! Artifact serialization: comma-separated text with a header row, floats
//! printed with 17 significant digits so every value round-trips losslessly,
//! and `key: value` metadata records. Identical inputs produce byte-identical
//! files.

use crate::chaos::OrbitStats;
use crate::market::{AgentActivity, RunSummary, TradeRecord, RNG_ALGORITHM};
use crate::stats::{Ccdf, ClassBreakdown, FitResult, WinLossProfile};
use crate::ChaoticState;

use super::config::ExperimentConfig;
use super::CaseRow;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Shortest representation that still pins the exact f64: 17 significant
/// decimal digits.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub(crate) fn write_kv(path: &Path, pairs: &[(String, String)]) -> io::Result<()> {
    let mut w = create(path)?;
    for (key, value) in pairs {
        writeln!(w, "{key}: {value}")?;
    }
    w.flush()
}

/// Full config echo (minus the output location, which the file's own
/// placement already pins), generator identity, code version and the run
/// counters.
pub(crate) fn write_metadata(
    path: &Path,
    config: &ExperimentConfig,
    summary: &RunSummary,
    active_agents: usize,
    passive_agents: usize,
    never_selected: usize,
) -> io::Result<()> {
    let pairs = vec![
        ("case_id".into(), config.case_id.clone()),
        ("n_agents".into(), config.n_agents.to_string()),
        ("initial_money".into(), fmt_f64(config.initial_money)),
        (
            "total_money".into(),
            fmt_f64(config.n_agents as f64 * config.initial_money),
        ),
        ("total_steps".into(), config.total_steps.to_string()),
        ("lambda_a".into(), fmt_f64(config.lambda_a)),
        ("lambda_b".into(), fmt_f64(config.lambda_b)),
        ("map_start_x".into(), fmt_f64(config.map_start.0)),
        ("map_start_y".into(), fmt_f64(config.map_start.1)),
        ("map_discard".into(), config.map_discard.to_string()),
        ("rng_seed".into(), config.rng_seed.to_string()),
        ("rng_algorithm".into(), RNG_ALGORITHM.to_string()),
        (
            "class_bound_poor".into(),
            fmt_f64(config.class_bounds.poor_upper()),
        ),
        (
            "class_bound_middle".into(),
            fmt_f64(config.class_bounds.middle_upper()),
        ),
        ("exp_fit_min_prob".into(), fmt_f64(config.exp_fit_min_prob)),
        ("pareto_threshold".into(), fmt_f64(config.pareto_threshold)),
        ("include_passive".into(), config.include_passive.to_string()),
        ("emit_trace".into(), config.emit_trace.to_string()),
        ("code_version".into(), env!("CARGO_PKG_VERSION").to_string()),
        ("summary_executed".into(), summary.executed.to_string()),
        (
            "summary_skipped_insufficient".into(),
            summary.skipped_insufficient.to_string(),
        ),
        (
            "summary_skipped_self".into(),
            summary.skipped_self.to_string(),
        ),
        (
            "summary_conservation_rel_error".into(),
            fmt_f64(summary.conservation_rel_error),
        ),
        ("active_agents".into(), active_agents.to_string()),
        ("passive_agents".into(), passive_agents.to_string()),
        ("never_selected".into(), never_selected.to_string()),
    ];
    write_kv(path, &pairs)
}

pub(crate) fn write_balances(path: &Path, balances: &[f64]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "agent_index,final_money")?;
    for (agent, &money) in balances.iter().enumerate() {
        writeln!(w, "{agent},{}", fmt_f64(money))?;
    }
    w.flush()
}

pub(crate) fn write_activity(path: &Path, activity: &AgentActivity) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "agent_index,times_i,times_j,executed_as_i,executed_as_j")?;
    for agent in 0..activity.len() {
        writeln!(
            w,
            "{agent},{},{},{},{}",
            activity.times_i()[agent],
            activity.times_j()[agent],
            activity.executed_as_i()[agent],
            activity.executed_as_j()[agent],
        )?;
    }
    w.flush()
}

pub(crate) fn write_ccdf(path: &Path, ccdf: &Ccdf) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "money_level,prob_geq")?;
    for (&m, &p) in ccdf.money_levels.iter().zip(&ccdf.prob_geq) {
        writeln!(w, "{},{}", fmt_f64(m), fmt_f64(p))?;
    }
    w.flush()
}

pub(crate) fn write_classes(path: &Path, breakdown: &ClassBreakdown) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "class,population_share,money_share")?;
    for (name, share) in [
        ("poor", breakdown.poor),
        ("middle", breakdown.middle),
        ("rich", breakdown.rich),
    ] {
        writeln!(
            w,
            "{name},{},{}",
            fmt_f64(share.population_share),
            fmt_f64(share.money_share)
        )?;
    }
    w.flush()
}

pub(crate) fn write_fits(path: &Path, fits: &[FitResult]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "model,parameter,lo,hi,r_squared")?;
    for fit in fits {
        writeln!(
            w,
            "{},{},{},{},{}",
            fit.model,
            fmt_f64(fit.parameter),
            fmt_f64(fit.fit_range.0),
            fmt_f64(fit.fit_range.1),
            fmt_f64(fit.r_squared),
        )?;
    }
    w.flush()
}

pub(crate) fn write_winloss(path: &Path, profile: &WinLossProfile) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "rank,agent_index,losses,net_wins")?;
    for (rank, entry) in profile.entries.iter().enumerate() {
        writeln!(
            w,
            "{rank},{},{},{}",
            entry.agent_index, entry.losses, entry.net_wins
        )?;
    }
    w.flush()
}

pub(crate) fn write_attractor(path: &Path, points: &[ChaoticState]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "x,y")?;
    for p in points {
        writeln!(w, "{},{}", fmt_f64(p.x()), fmt_f64(p.y()))?;
    }
    w.flush()
}

pub(crate) fn write_spectrum(path: &Path, freqs: &[f64], magnitudes: &[f64]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "w,magnitude")?;
    for (&f, &m) in freqs.iter().zip(magnitudes) {
        writeln!(w, "{},{}", fmt_f64(f), fmt_f64(m))?;
    }
    w.flush()
}

pub(crate) fn write_occupancy(path: &Path, stats: &OrbitStats) -> io::Result<()> {
    let pairs = vec![
        ("n_points".into(), stats.n_points.to_string()),
        ("n_x_gt_y".into(), stats.n_x_gt_y.to_string()),
        ("n_y_gt_x".into(), stats.n_y_gt_x.to_string()),
        ("n_diag".into(), stats.n_diag.to_string()),
        ("frac_x_gt_y".into(), fmt_f64(stats.frac_x_gt_y())),
        ("frac_y_gt_x".into(), fmt_f64(stats.frac_y_gt_x())),
        ("frac_diag".into(), fmt_f64(stats.frac_diag())),
    ];
    write_kv(path, &pairs)
}

pub(crate) fn write_sweep_summary(path: &Path, rows: &[CaseRow]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "case_id,lambda_a,lambda_b,status,active_agents,passive_agents,never_selected,\
         poor_money_share,middle_money_share,rich_money_share,\
         poor_population_share,middle_population_share,rich_population_share"
    )?;
    for row in rows {
        match &row.outcome {
            Ok(stats) => writeln!(
                w,
                "{},{},{},ok,{},{},{},{},{},{},{},{},{}",
                row.case_id,
                fmt_f64(row.lambda_a),
                fmt_f64(row.lambda_b),
                stats.active_agents,
                stats.passive_agents,
                stats.never_selected,
                fmt_f64(stats.poor_money_share),
                fmt_f64(stats.middle_money_share),
                fmt_f64(stats.rich_money_share),
                fmt_f64(stats.poor_population_share),
                fmt_f64(stats.middle_population_share),
                fmt_f64(stats.rich_population_share),
            )?,
            Err(message) => writeln!(
                w,
                "{},{},{},error: {},,,,,,,,,",
                row.case_id,
                fmt_f64(row.lambda_a),
                fmt_f64(row.lambda_b),
                message.replace([',', '\n'], ";"),
            )?,
        }
    }
    w.flush()
}

/// Streams one trace row per transaction; IO failures are held until
/// [`TraceWriter::finish`] so the hot loop never unwinds.
pub(crate) struct TraceWriter {
    writer: BufWriter<File>,
    error: Option<io::Error>,
}

impl TraceWriter {
    pub(crate) fn create(path: &Path) -> io::Result<Self> {
        let mut writer = create(path)?;
        writeln!(writer, "t,i,j,upsilon,delta_m,executed")?;
        Ok(TraceWriter {
            writer,
            error: None,
        })
    }

    pub(crate) fn record(&mut self, trade: &TradeRecord) {
        if self.error.is_some() {
            return;
        }
        let result = writeln!(
            self.writer,
            "{},{},{},{},{},{}",
            trade.t,
            trade.pair.i,
            trade.pair.j,
            fmt_f64(trade.upsilon),
            fmt_f64(trade.delta_m),
            trade.executed,
        );
        if let Err(e) = result {
            self.error = Some(e);
        }
    }

    pub(crate) fn finish(mut self) -> io::Result<()> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.writer.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_the_format() {
        for v in [
            0.0,
            1000.0,
            -1.5,
            1.0 / 3.0,
            1.08429,
            f64::MIN_POSITIVE,
            6.02214076e23,
        ] {
            let parsed: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "value {v}");
        }
        assert!(fmt_f64(f64::NAN).parse::<f64>().unwrap().is_nan());
    }
}
