//! Experiment configuration: a flat `key: value` document with `#` comments,
//! strict about unknown and duplicate keys so typos cannot silently fall back
//! to defaults.
//!
//! Required keys are `n_agents`, `initial_money`, `lambda_a`, `lambda_b` and
//! `rng_seed`; a preset or a command-line override can stand in for some of
//! them (see [`Preset`] and [`Overrides`]). Everything else has documented
//! defaults. Sweep documents may add a `cases` key
//! (`cases: 1=1.032,2=1.03781,...`) and may omit `lambda_b`, which each case
//! replaces anyway.

use crate::chaos::{ChaoticState, MapParams, DEFAULT_DISCARD, DEFAULT_START};
use crate::stats::ClassBounds;
use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

/// The eight default sweep values of `lambda_b`, running from the symmetric
/// attractor to the widest in-window asymmetry, with `lambda_a` held at
/// 1.032.
pub const DEFAULT_SWEEP_LAMBDA_B: [f64; 8] = [
    1.032, 1.03781, 1.04362, 1.04943, 1.06105, 1.07267, 1.07848, 1.08429,
];

/// Runs with at most this many steps default to emitting a per-transaction
/// trace; longer runs default it off (a full-scale trace is tens of
/// millions of rows).
pub const TRACE_DEFAULT_MAX_STEPS: u64 = 1_000_000;

const KNOWN_KEYS: &[&str] = &[
    "case_id",
    "n_agents",
    "initial_money",
    "total_steps",
    "lambda_a",
    "lambda_b",
    "map_start_x",
    "map_start_y",
    "map_discard",
    "rng_seed",
    "class_bound_poor",
    "class_bound_middle",
    "exp_fit_min_prob",
    "pareto_threshold",
    "include_passive",
    "output_dir",
    "emit_trace",
    "cases",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("key `{key}`: cannot parse `{value}` as {expected}")]
    InvalidValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },
    #[error("key `{key}`: {message}")]
    Validation { key: &'static str, message: String },
}

/// Named scale profiles. A preset only supplies defaults; explicit config
/// keys always win.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 500 agents — seconds per case, used by the acceptance suite.
    Desk,
    /// 5000 agents — the full-scale profile (50 million steps per case).
    Paper,
}

impl Preset {
    fn n_agents(self) -> usize {
        match self {
            Preset::Desk => 500,
            Preset::Paper => 5000,
        }
    }

    fn initial_money(self) -> f64 {
        1000.0
    }

    fn emit_trace(self) -> bool {
        matches!(self, Preset::Desk)
    }
}

/// Command-line overrides applied on top of the document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub rng_seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

/// A fully resolved and validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub case_id: String,
    pub n_agents: usize,
    pub initial_money: f64,
    pub total_steps: u64,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub map_start: (f64, f64),
    pub map_discard: u64,
    pub rng_seed: u64,
    pub class_bounds: ClassBounds,
    pub exp_fit_min_prob: f64,
    pub pareto_threshold: f64,
    pub include_passive: bool,
    pub output_dir: PathBuf,
    pub emit_trace: bool,
}

/// One sweep entry: a case label and the `lambda_b` it runs with.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCase {
    pub case_id: String,
    pub lambda_b: f64,
}

/// A base configuration plus the cases that vary `lambda_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ExperimentConfig,
    pub cases: Vec<SweepCase>,
}

impl SweepSpec {
    /// The resolved configuration for one case: the base with `case_id` and
    /// `lambda_b` substituted. Seed and map start are shared across cases so
    /// the sweep is comparable case-to-case.
    pub fn case_config(&self, case: &SweepCase) -> ExperimentConfig {
        let mut config = self.base.clone();
        config.case_id = case.case_id.clone();
        config.lambda_b = case.lambda_b;
        config
    }
}

struct RawDoc {
    entries: HashMap<String, (usize, String)>,
}

impl RawDoc {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: HashMap<String, (usize, String)> = HashMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw_line.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once(':')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    message: format!("expected `key: value`, got `{stripped}`"),
                })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    message: "empty key or value".to_string(),
                });
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if entries.contains_key(key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            entries.insert(key.to_string(), (line, value.to_string()));
        }
        Ok(RawDoc { entries })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn parse_value<T: FromStr>(
        &self,
        key: &str,
        expected: &'static str,
    ) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(value) => value
                .parse::<T>()
                .map(Some)
                .map_err(|_| ConfigError::InvalidValue {
                    key: key.to_string(),
                    value: value.to_string(),
                    expected,
                }),
        }
    }
}

fn parse_bool(raw: &RawDoc, key: &str) -> Result<Option<bool>, ConfigError> {
    match raw.get(key) {
        None => Ok(None),
        Some("true") => Ok(Some(true)),
        Some("false") => Ok(Some(false)),
        Some(other) => Err(ConfigError::InvalidValue {
            key: key.to_string(),
            value: other.to_string(),
            expected: "`true` or `false`",
        }),
    }
}

fn validate_case_id(id: &str) -> Result<(), ConfigError> {
    if id.is_empty() || id == "." || id == ".." || id.contains(['/', '\\']) {
        return Err(ConfigError::Validation {
            key: "case_id",
            message: format!("`{id}` is not usable as a directory name"),
        });
    }
    Ok(())
}

fn resolve(
    raw: &RawDoc,
    preset: Option<Preset>,
    overrides: &Overrides,
    lambda_b_optional: bool,
) -> Result<ExperimentConfig, ConfigError> {
    let n_agents = raw
        .parse_value::<usize>("n_agents", "a positive integer")?
        .or(preset.map(Preset::n_agents))
        .ok_or(ConfigError::MissingKey { key: "n_agents" })?;
    if n_agents < 2 {
        return Err(ConfigError::Validation {
            key: "n_agents",
            message: format!("a market needs at least 2 agents, got {n_agents}"),
        });
    }

    let initial_money = raw
        .parse_value::<f64>("initial_money", "a number")?
        .or(preset.map(Preset::initial_money))
        .ok_or(ConfigError::MissingKey {
            key: "initial_money",
        })?;
    if !(initial_money.is_finite() && initial_money > 0.0) {
        return Err(ConfigError::Validation {
            key: "initial_money",
            message: format!("must be positive and finite, got {initial_money}"),
        });
    }

    let lambda_a = raw
        .parse_value::<f64>("lambda_a", "a number")?
        .ok_or(ConfigError::MissingKey { key: "lambda_a" })?;
    let lambda_b = match raw.parse_value::<f64>("lambda_b", "a number")? {
        Some(v) => v,
        None if lambda_b_optional => lambda_a,
        None => return Err(ConfigError::MissingKey { key: "lambda_b" }),
    };
    MapParams::new(lambda_a, lambda_b).map_err(|e| ConfigError::Validation {
        key: "lambda_a",
        message: e.to_string(),
    })?;

    let total_steps = match raw.parse_value::<u64>("total_steps", "a positive integer")? {
        Some(v) => v,
        None => {
            let n = n_agents as u64;
            n.checked_mul(n)
                .and_then(|sq| sq.checked_mul(2))
                .ok_or(ConfigError::Validation {
                    key: "total_steps",
                    message: "default 2*N^2 overflows; set total_steps explicitly".to_string(),
                })?
        }
    };
    if total_steps == 0 {
        return Err(ConfigError::Validation {
            key: "total_steps",
            message: "must be at least 1".to_string(),
        });
    }

    let map_start_x = raw
        .parse_value::<f64>("map_start_x", "a number")?
        .unwrap_or(DEFAULT_START.0);
    let map_start_y = raw
        .parse_value::<f64>("map_start_y", "a number")?
        .unwrap_or(DEFAULT_START.1);
    ChaoticState::new(map_start_x, map_start_y).map_err(|e| ConfigError::Validation {
        key: "map_start_x",
        message: e.to_string(),
    })?;

    let map_discard = raw
        .parse_value::<u64>("map_discard", "a nonnegative integer")?
        .unwrap_or(DEFAULT_DISCARD);

    let rng_seed = match overrides.rng_seed {
        Some(seed) => seed,
        None => raw
            .parse_value::<u64>("rng_seed", "an unsigned 64-bit integer")?
            .ok_or(ConfigError::MissingKey { key: "rng_seed" })?,
    };

    let poor = raw
        .parse_value::<f64>("class_bound_poor", "a number")?
        .unwrap_or(500.0);
    let middle = raw
        .parse_value::<f64>("class_bound_middle", "a number")?
        .unwrap_or(2000.0);
    let class_bounds = ClassBounds::new(poor, middle).map_err(|e| ConfigError::Validation {
        key: "class_bound_poor",
        message: e.to_string(),
    })?;

    let exp_fit_min_prob = raw
        .parse_value::<f64>("exp_fit_min_prob", "a number in (0, 1]")?
        .unwrap_or(0.01);
    if !(exp_fit_min_prob > 0.0 && exp_fit_min_prob <= 1.0) {
        return Err(ConfigError::Validation {
            key: "exp_fit_min_prob",
            message: format!("must lie in (0, 1], got {exp_fit_min_prob}"),
        });
    }

    let pareto_threshold = raw
        .parse_value::<f64>("pareto_threshold", "a positive number")?
        .unwrap_or(2000.0);
    if !(pareto_threshold.is_finite() && pareto_threshold > 0.0) {
        return Err(ConfigError::Validation {
            key: "pareto_threshold",
            message: format!("must be positive and finite, got {pareto_threshold}"),
        });
    }

    let include_passive = parse_bool(raw, "include_passive")?.unwrap_or(false);

    let case_id = raw.get("case_id").unwrap_or("run").to_string();
    validate_case_id(&case_id)?;

    let output_dir = overrides
        .output_dir
        .clone()
        .or_else(|| raw.get("output_dir").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let emit_trace = match parse_bool(raw, "emit_trace")? {
        Some(v) => v,
        None => preset
            .map(Preset::emit_trace)
            .unwrap_or(total_steps <= TRACE_DEFAULT_MAX_STEPS),
    };

    Ok(ExperimentConfig {
        case_id,
        n_agents,
        initial_money,
        total_steps,
        lambda_a,
        lambda_b,
        map_start: (map_start_x, map_start_y),
        map_discard,
        rng_seed,
        class_bounds,
        exp_fit_min_prob,
        pareto_threshold,
        include_passive,
        output_dir,
        emit_trace,
    })
}

fn parse_cases(raw: &RawDoc) -> Result<Vec<SweepCase>, ConfigError> {
    let Some(spec) = raw.get("cases") else {
        return Ok(DEFAULT_SWEEP_LAMBDA_B
            .iter()
            .enumerate()
            .map(|(idx, &lambda_b)| SweepCase {
                case_id: (idx + 1).to_string(),
                lambda_b,
            })
            .collect());
    };
    let mut cases = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        let invalid = || ConfigError::InvalidValue {
            key: "cases".to_string(),
            value: part.to_string(),
            expected: "`case_id=lambda_b` entries separated by commas",
        };
        let (id, lambda) = part.split_once('=').ok_or_else(invalid)?;
        let case_id = id.trim().to_string();
        validate_case_id(&case_id)?;
        let lambda_b: f64 = lambda.trim().parse().map_err(|_| invalid())?;
        if !(lambda_b.is_finite() && lambda_b > 0.0) {
            return Err(ConfigError::Validation {
                key: "cases",
                message: format!("lambda_b must be positive and finite, got {lambda_b}"),
            });
        }
        cases.push(SweepCase { case_id, lambda_b });
    }
    for (idx, case) in cases.iter().enumerate() {
        if cases[..idx].iter().any(|c| c.case_id == case.case_id) {
            return Err(ConfigError::Validation {
                key: "cases",
                message: format!("duplicate case id `{}`", case.case_id),
            });
        }
    }
    Ok(cases)
}

/// Parses and validates a single-run configuration document.
pub fn load_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    load_config_with(text, None, &Overrides::default())
}

/// [`load_config`] with a preset supplying scale defaults and command-line
/// overrides applied.
pub fn load_config_with(
    text: &str,
    preset: Option<Preset>,
    overrides: &Overrides,
) -> Result<ExperimentConfig, ConfigError> {
    let raw = RawDoc::parse(text)?;
    if let Some((line, _)) = raw.entries.get("cases") {
        return Err(ConfigError::Validation {
            key: "cases",
            message: format!("line {line}: only valid in sweep configurations"),
        });
    }
    resolve(&raw, preset, overrides, false)
}

/// Parses and validates a sweep document: a base configuration plus a
/// `cases` list (defaulting to the eight-value `lambda_b` ladder).
pub fn load_sweep(text: &str) -> Result<SweepSpec, ConfigError> {
    load_sweep_with(text, None, &Overrides::default())
}

pub fn load_sweep_with(
    text: &str,
    preset: Option<Preset>,
    overrides: &Overrides,
) -> Result<SweepSpec, ConfigError> {
    let raw = RawDoc::parse(text)?;
    let base = resolve(&raw, preset, overrides, true)?;
    let cases = parse_cases(&raw)?;
    Ok(SweepSpec { base, cases })
}
