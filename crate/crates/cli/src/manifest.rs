//! Run manifests: a JSON sidecar written next to every output file so
//! any result can be re-derived from the manifest alone — tool version,
//! resolved seed and where it came from, the fully resolved config, and
//! the paths that were written.

use std::path::Path;

use mpt_core::decision::ProbabilityMode;
use mpt_core::simulation::SimulationConfig;
use serde::Serialize;

use crate::config::SeedSource;
use crate::error::{CliError, Result};

/// Serializable echo of the weight set (gamma as stored magnitude).
#[derive(Debug, Serialize)]
pub struct WeightsEcho {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub zeta: f64,
    pub theta: f64,
    #[serde(rename = "lambda")]
    pub lambda_discount: f64,
}

/// Serializable echo of the sampling ranges.
#[derive(Debug, Serialize)]
pub struct SamplingEcho {
    pub rho: [f64; 2],
    pub s: [f64; 2],
    pub r: [f64; 2],
    pub trust: [f64; 2],
    pub d: [f64; 2],
}

/// Serializable echo of one action.
#[derive(Debug, Serialize)]
pub struct ActionEcho {
    pub id: u32,
    pub label: String,
    pub delta_r: f64,
    pub delta_s: f64,
    pub delta_trust: f64,
}

/// Serializable echo of the full resolved simulation config.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub n_universes: usize,
    pub horizon: usize,
    pub n_replications: usize,
    pub probability_mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universe_weights: Option<Vec<f64>>,
    pub weights: WeightsEcho,
    pub sampling: SamplingEcho,
    pub actions: Vec<ActionEcho>,
}

impl ConfigEcho {
    pub fn from_config(cfg: &SimulationConfig) -> Self {
        let (probability_mode, universe_weights) = match &cfg.probability_mode {
            ProbabilityMode::Uniform => ("uniform".to_string(), None),
            ProbabilityMode::Weighted(w) => ("weighted".to_string(), Some(w.clone())),
        };
        Self {
            n_universes: cfg.n_universes,
            horizon: cfg.horizon,
            n_replications: cfg.n_replications,
            probability_mode,
            universe_weights,
            weights: WeightsEcho {
                alpha: cfg.weights.alpha,
                beta: cfg.weights.beta,
                gamma: cfg.weights.gamma,
                delta: cfg.weights.delta,
                zeta: cfg.weights.zeta,
                theta: cfg.weights.theta,
                lambda_discount: cfg.weights.lambda_discount,
            },
            sampling: SamplingEcho {
                rho: [cfg.sampling.rho_range.0, cfg.sampling.rho_range.1],
                s: [cfg.sampling.s_range.0, cfg.sampling.s_range.1],
                r: [cfg.sampling.r_range.0, cfg.sampling.r_range.1],
                trust: [cfg.sampling.trust_range.0, cfg.sampling.trust_range.1],
                d: [cfg.sampling.d_range.0, cfg.sampling.d_range.1],
            },
            actions: cfg
                .actions
                .actions()
                .iter()
                .map(|a| ActionEcho {
                    id: a.id,
                    label: a.label.clone(),
                    delta_r: a.effect.delta_r,
                    delta_s: a.effect.delta_s,
                    delta_trust: a.effect.delta_trust,
                })
                .collect(),
        }
    }
}

/// The manifest written alongside every command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_source: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_seeds: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_count: Option<usize>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigEcho>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            tool: "mpt",
            version: env!("CARGO_PKG_VERSION"),
            command,
            master_seed: None,
            seed_source: None,
            n_seeds: None,
            input: None,
            record_count: None,
            outputs: Vec::new(),
            config: None,
        }
    }

    pub fn with_seed(mut self, seed: u64, source: SeedSource) -> Self {
        self.master_seed = Some(seed);
        self.seed_source = Some(source.as_str());
        self
    }

    pub fn with_config(mut self, cfg: &SimulationConfig) -> Self {
        self.config = Some(ConfigEcho::from_config(cfg));
        self
    }

    /// Pretty JSON, newline-terminated, stable field order.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("manifest serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }
}
