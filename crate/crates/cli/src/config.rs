//! Config file ingestion: a sectioned TOML schema that fills in the
//! default study parameters for anything omitted and rejects anything it
//! does not recognize.
//!
//! An empty file is a complete, valid config (the full replication
//! defaults: 5 universes, 10 steps, weights 1.0/0.8/0.9/0.6/0.5, no
//! integrity term, no discounting, one zero-effect action). Unknown keys
//! are errors, not warnings — a typo must never silently fall back to a
//! default. Validation failures report the offending section and key and,
//! where the key appears literally in the file, its line number.
//!
//! Schema (all keys optional):
//!
//! ```toml
//! [run]
//! n_universes = 5
//! horizon = 10
//! n_replications = 1
//! seed = 42                     # may be overridden by --seed
//! probability_mode = "uniform"  # or "weighted"
//! universe_weights = [1.0, 1.0] # required iff probability_mode = "weighted"
//!
//! [weights]
//! alpha = 1.0
//! beta = 0.8
//! gamma = -0.9   # sign accepted either way; risk always subtracts
//! delta = 0.6
//! zeta = 0.5
//! theta = 0.0
//! lambda = 0.0   # per-step discount factor in [0, 1]
//!
//! [sampling]    # uniform ranges, each a [lo, hi] pair inside [0, 1]
//! rho = [0.0, 1.0]
//! s = [0.5, 1.0]
//! r = [0.0, 1.0]
//! trust = [0.0, 1.0]
//! d = [0.2, 0.9]
//!
//! [[actions]]
//! id = 0
//! label = "observe"
//! delta_r = 0.0
//! delta_s = 0.0
//! delta_trust = 0.0
//! ```

use std::fs;
use std::path::Path;

use mpt_core::decision::{Action, ActionEffect, ActionSet, ProbabilityMode};
use mpt_core::model::Weights;
use mpt_core::simulation::{SamplingSpec, SimulationConfig};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    run: Option<RawRun>,
    weights: Option<RawWeights>,
    sampling: Option<RawSampling>,
    actions: Option<Vec<RawAction>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    n_universes: Option<usize>,
    horizon: Option<usize>,
    n_replications: Option<usize>,
    seed: Option<u64>,
    probability_mode: Option<String>,
    universe_weights: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    delta: Option<f64>,
    zeta: Option<f64>,
    theta: Option<f64>,
    lambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSampling {
    rho: Option<[f64; 2]>,
    s: Option<[f64; 2]>,
    r: Option<[f64; 2]>,
    trust: Option<[f64; 2]>,
    d: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    id: u32,
    label: Option<String>,
    delta_r: Option<f64>,
    delta_s: Option<f64>,
    delta_trust: Option<f64>,
}

/// A parsed config: the full simulation setup (with a placeholder master
/// seed of 0) plus the seed the file itself requested, if any. Seed
/// resolution — flag beats config beats generated — happens per command.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub cfg: SimulationConfig,
    pub config_seed: Option<u64>,
}

/// Reads and parses a config file. Missing file is an I/O error (exit 2);
/// anything wrong inside the file is a usage error (exit 1).
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Best-effort line lookup: the first line on which `key` is assigned or
/// opens a section, for error messages about semantic violations (the
/// TOML parser only spans syntax errors).
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    for (index, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        let assigned = trimmed
            .strip_prefix(key)
            .map(|rest| rest.trim_start().starts_with('='))
            .unwrap_or(false);
        let section =
            trimmed.starts_with(&format!("[{key}]")) || trimmed.starts_with(&format!("[[{key}]]"));
        if assigned || section {
            return Some(index + 1);
        }
    }
    None
}

/// Formats a semantic config error as `[section] key (line N): message`.
fn semantic_error(
    text: &str,
    section: &str,
    key: &str,
    message: impl std::fmt::Display,
) -> CliError {
    match line_of_key(text, key) {
        Some(line) => CliError::usage(format!("[{section}] {key} (line {line}): {message}")),
        None => CliError::usage(format!("[{section}] {key}: {message}")),
    }
}

/// The config key a core validation error refers to, for line lookup.
fn key_for_core_field(field: &str) -> &'static str {
    match field {
        "alpha" => "alpha",
        "beta" => "beta",
        "gamma" => "gamma",
        "delta" => "delta",
        "zeta" => "zeta",
        "theta" => "theta",
        "lambda_discount" => "lambda",
        "rho_range" => "rho",
        "s_range" => "s",
        "r_range" => "r",
        "trust_range" => "trust",
        "d_range" => "d",
        "universes" => "n_universes",
        "time steps" => "horizon",
        "replications" => "n_replications",
        _ => "",
    }
}

fn wrap_core_error(text: &str, section: &str, err: mpt_core::Error) -> CliError {
    let key = match &err {
        mpt_core::Error::NonFinite { field, .. } => key_for_core_field(field),
        mpt_core::Error::OutOfRange { field, .. } => key_for_core_field(field),
        mpt_core::Error::InvertedRange { field, .. } => key_for_core_field(field),
        mpt_core::Error::ZeroCount { field } => key_for_core_field(field),
        _ => "",
    };
    if key.is_empty() {
        CliError::usage(format!("[{section}]: {err}"))
    } else {
        semantic_error(text, section, key, err)
    }
}

/// Parses config text into a validated simulation setup.
pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| CliError::usage(format!("config parse error: {e}")))?;

    let defaults = SimulationConfig::replication_defaults(0);
    let run = raw.run.unwrap_or_default();
    let weights_section = raw.weights.unwrap_or_default();
    let sampling_section = raw.sampling.unwrap_or_default();

    // Weights: gamma is accepted signed (the formula applies the minus
    // sign itself) and normalized to a magnitude here, so -0.9 and 0.9
    // configure the same model.
    let dw = defaults.weights;
    let weights = Weights::new(
        weights_section.alpha.unwrap_or(dw.alpha),
        weights_section.beta.unwrap_or(dw.beta),
        weights_section.gamma.unwrap_or(dw.gamma).abs(),
        weights_section.delta.unwrap_or(dw.delta),
        weights_section.zeta.unwrap_or(dw.zeta),
        weights_section.theta.unwrap_or(dw.theta),
        weights_section.lambda.unwrap_or(dw.lambda_discount),
    )
    .map_err(|e| wrap_core_error(text, "weights", e))?;

    let ds = defaults.sampling;
    let to_pair = |range: [f64; 2]| (range[0], range[1]);
    let sampling = SamplingSpec::new(
        sampling_section.rho.map(to_pair).unwrap_or(ds.rho_range),
        sampling_section.s.map(to_pair).unwrap_or(ds.s_range),
        sampling_section.r.map(to_pair).unwrap_or(ds.r_range),
        sampling_section
            .trust
            .map(to_pair)
            .unwrap_or(ds.trust_range),
        sampling_section.d.map(to_pair).unwrap_or(ds.d_range),
    )
    .map_err(|e| wrap_core_error(text, "sampling", e))?;

    let actions = match raw.actions {
        None => ActionSet::replication_default(),
        Some(raw_actions) => {
            let actions: Vec<Action> = raw_actions
                .into_iter()
                .map(|a| {
                    let label = a.label.unwrap_or_else(|| format!("action {}", a.id));
                    Action::new(
                        a.id,
                        label,
                        ActionEffect {
                            delta_r: a.delta_r.unwrap_or(0.0),
                            delta_s: a.delta_s.unwrap_or(0.0),
                            delta_trust: a.delta_trust.unwrap_or(0.0),
                        },
                    )
                })
                .collect();
            ActionSet::new(actions).map_err(|e| wrap_core_error(text, "actions", e))?
        }
    };

    let probability_mode = match run.probability_mode.as_deref() {
        None | Some("uniform") => {
            if run.universe_weights.is_some() {
                return Err(semantic_error(
                    text,
                    "run",
                    "universe_weights",
                    "only meaningful with probability_mode = \"weighted\"",
                ));
            }
            ProbabilityMode::Uniform
        }
        Some("weighted") => match run.universe_weights {
            Some(weights) => ProbabilityMode::Weighted(weights),
            None => {
                return Err(semantic_error(
                    text,
                    "run",
                    "probability_mode",
                    "probability_mode = \"weighted\" requires universe_weights",
                ));
            }
        },
        Some(other) => {
            return Err(semantic_error(
                text,
                "run",
                "probability_mode",
                format!("unknown mode '{other}' (expected \"uniform\" or \"weighted\")"),
            ));
        }
    };

    let cfg = SimulationConfig {
        n_universes: run.n_universes.unwrap_or(defaults.n_universes),
        horizon: run.horizon.unwrap_or(defaults.horizon),
        n_replications: run.n_replications.unwrap_or(defaults.n_replications),
        master_seed: 0,
        weights,
        sampling,
        actions,
        probability_mode,
    };
    cfg.validate()
        .map_err(|e| wrap_core_error(text, "run", e))?;
    // Weighted-mode vectors are validated eagerly so a bad config fails
    // at load, not at run time.
    mpt_core::decision::universe_probabilities(cfg.n_universes, &cfg.probability_mode)
        .map_err(|e| wrap_core_error(text, "run", e))?;

    Ok(LoadedConfig {
        cfg,
        config_seed: run.seed,
    })
}

/// Where the master seed for a run came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedSource {
    Flag,
    Config,
    Generated,
}

impl SeedSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeedSource::Flag => "flag",
            SeedSource::Config => "config",
            SeedSource::Generated => "generated",
        }
    }
}

/// Resolves the master seed: an explicit `--seed` flag wins, then the
/// config file's `seed` key, then a fresh seed derived from the clock.
/// Callers print generated seeds so every run stays reproducible.
pub fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> (u64, SeedSource) {
    if let Some(seed) = flag {
        return (seed, SeedSource::Flag);
    }
    if let Some(seed) = config {
        return (seed, SeedSource::Config);
    }
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0x5EED_5EED_5EED_5EED);
    // One mixing step decorrelates seeds generated in quick succession.
    let seed = mpt_core::rng::RngStream::from_state(nanos).next_u64();
    (seed, SeedSource::Generated)
}
