//! Multiverse privacy decision model.
//!
//! Privacy decisions are scored across a set of parallel "universes" —
//! sampled realizations of the context a decision could land in. This
//! crate provides the full pipeline:
//!
//! - [`model`] — the pointwise scores: a weighted utility over privacy
//!   preference, security, risk, trust, and demographic sensitivity, and
//!   a contextual-integrity score of the same variables.
//! - [`decision`] — candidate actions, probability-weighted expected
//!   utility over universes, argmax selection, and a discounted
//!   multi-step value function.
//! - [`simulation`] — a seeded, bit-reproducible Monte Carlo engine that
//!   samples universes over time, applies the decision rule, and
//!   aggregates utility by contextual risk band.
//! - [`stats`] — Pearson correlation with exact two-sided t-test
//!   p-values and Fisher-z confidence intervals, the standard
//!   five-hypothesis suite over simulated records, and a closed-form
//!   correlation oracle for cross-checking the engine.
//! - [`rng`] — the deterministic random number generator (SplitMix64)
//!   with per-(replication, universe) stream derivation.
//!
//! All numeric work is plain `f64` with no hidden rounding; every
//! constructor validates its inputs and returns [`error::Error`] instead
//! of panicking. Given the same configuration and master seed, every
//! platform produces bitwise-identical results.

pub mod decision;
pub mod error;
pub mod model;
pub mod rng;
pub mod simulation;
pub mod stats;

pub use decision::{
    apply_action, evaluate_universes, expected_utility, select_action, universe_probabilities,
    value_recursive, Action, ActionEffect, ActionSet, Decision, ProbabilityMode, UniverseOutcome,
    ValueEstimate,
};
pub use error::{Error, Result};
pub use model::{
    ci_score, g_demographic, utility, ContextSample, DemographicProfile, UtilityBreakdown, Weights,
};
pub use rng::{derive_stream, RngStream};
pub use simulation::{
    band_summary, classify_risk_band, run_simulation, sample_context, BandSummary, RiskBand,
    SamplingSpec, SimulationConfig, SummaryCell, TrajectoryRecord,
};
pub use stats::{
    analytic_r, fisher_ci_95, p_value_two_sided, pearson_r, quantile, run_hypotheses,
    HypothesisOutcome, HypothesisResult, HypothesisSpec, Variable, HYPOTHESES,
};
