//! Monte Carlo engine: seeded sampling of contexts per universe per time
//! step, per-step action selection, trajectory recording, and risk-band
//! aggregation.
//!
//! Each (replication, universe) pair owns a private random stream derived
//! from the master seed (see [`crate::rng`]), so runs are bit-reproducible
//! and a universe's draws never depend on how many other universes exist.
//! At every step the engine samples one fresh context per universe, lets
//! the decision layer pick the expected-utility-maximizing action over the
//! whole universe set, and records one row per universe with that
//! universe's post-action context, utility, and integrity score.

use crate::decision::{select_action, universe_probabilities, ActionSet, ProbabilityMode};
use crate::error::{Error, Result};
use crate::model::{ContextSample, Weights};
use crate::rng::{derive_stream, RngStream};

pub use crate::rng::RngStream as Stream;

/// Per-variable uniform sampling ranges, each a closed subinterval of
/// `[0, 1]`. Degenerate ranges (`lo == hi`) give point distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingSpec {
    pub rho_range: (f64, f64),
    pub s_range: (f64, f64),
    pub r_range: (f64, f64),
    pub trust_range: (f64, f64),
    pub d_range: (f64, f64),
}

impl SamplingSpec {
    pub fn new(
        rho_range: (f64, f64),
        s_range: (f64, f64),
        r_range: (f64, f64),
        trust_range: (f64, f64),
        d_range: (f64, f64),
    ) -> Result<Self> {
        for (field, (lo, hi)) in [
            ("rho_range", rho_range),
            ("s_range", s_range),
            ("r_range", r_range),
            ("trust_range", trust_range),
            ("d_range", d_range),
        ] {
            for bound in [lo, hi] {
                if !bound.is_finite() {
                    return Err(Error::NonFinite {
                        field,
                        value: bound,
                    });
                }
                if !(0.0..=1.0).contains(&bound) {
                    return Err(Error::OutOfRange {
                        field,
                        value: bound,
                        lo: 0.0,
                        hi: 1.0,
                    });
                }
            }
            if lo > hi {
                return Err(Error::InvertedRange { field, lo, hi });
            }
        }
        Ok(Self {
            rho_range,
            s_range,
            r_range,
            trust_range,
            d_range,
        })
    }

    /// The study distributions: privacy preference, risk, and trust
    /// uniform on [0, 1]; security uniform on [0.5, 1]; demographic
    /// sensitivity uniform on [0.2, 0.9].
    pub fn replication_defaults() -> Self {
        Self {
            rho_range: (0.0, 1.0),
            s_range: (0.5, 1.0),
            r_range: (0.0, 1.0),
            trust_range: (0.0, 1.0),
            d_range: (0.2, 0.9),
        }
    }
}

/// Full description of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub n_universes: usize,
    /// Number of time steps per replication.
    pub horizon: usize,
    pub n_replications: usize,
    pub master_seed: u64,
    pub weights: Weights,
    pub sampling: SamplingSpec,
    pub actions: ActionSet,
    pub probability_mode: ProbabilityMode,
}

impl SimulationConfig {
    /// The study shape: 5 universes, 10 steps, 1 replication, default
    /// weights and sampling, a single zero-effect action, uniform
    /// universe probabilities.
    pub fn replication_defaults(master_seed: u64) -> Self {
        Self {
            n_universes: 5,
            horizon: 10,
            n_replications: 1,
            master_seed,
            weights: Weights::replication_defaults(),
            sampling: SamplingSpec::replication_defaults(),
            actions: ActionSet::replication_default(),
            probability_mode: ProbabilityMode::Uniform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_universes == 0 {
            return Err(Error::ZeroCount { field: "universes" });
        }
        if self.horizon == 0 {
            return Err(Error::ZeroCount {
                field: "time steps",
            });
        }
        if self.n_replications == 0 {
            return Err(Error::ZeroCount {
                field: "replications",
            });
        }
        Ok(())
    }

    /// Total record count this config produces.
    pub fn record_count(&self) -> usize {
        self.n_replications * self.n_universes * self.horizon
    }
}

/// Contextual risk band, tertiles of the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RiskBand {
    Low,
    Moderate,
    High,
}

impl RiskBand {
    pub const ALL: [RiskBand; 3] = [RiskBand::Low, RiskBand::Moderate, RiskBand::High];

    pub fn as_str(&self) -> &'static str {
        match self {
            RiskBand::Low => "low",
            RiskBand::Moderate => "moderate",
            RiskBand::High => "high",
        }
    }
}

impl std::fmt::Display for RiskBand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RiskBand {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "low" => Ok(RiskBand::Low),
            "moderate" => Ok(RiskBand::Moderate),
            "high" => Ok(RiskBand::High),
            other => Err(format!("unknown risk band '{other}'")),
        }
    }
}

/// Assigns a risk value to its band: low below 1/3, moderate from 1/3 up
/// to (but excluding) 2/3, high from 2/3 up.
pub fn classify_risk_band(r: f64) -> Result<RiskBand> {
    if !r.is_finite() {
        return Err(Error::NonFinite {
            field: "r",
            value: r,
        });
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange {
            field: "r",
            value: r,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if r < 1.0 / 3.0 {
        Ok(RiskBand::Low)
    } else if r < 2.0 / 3.0 {
        Ok(RiskBand::Moderate)
    } else {
        Ok(RiskBand::High)
    }
}

/// Draws one context from the spec, consuming exactly five values from
/// the stream in the fixed order rho, s, r, trust, d. The draw order is
/// part of the reproducibility contract and must never change.
pub fn sample_context(stream: &mut RngStream, spec: &SamplingSpec) -> ContextSample {
    let rho = stream.next_in_range(spec.rho_range.0, spec.rho_range.1);
    let s = stream.next_in_range(spec.s_range.0, spec.s_range.1);
    let r = stream.next_in_range(spec.r_range.0, spec.r_range.1);
    let trust = stream.next_in_range(spec.trust_range.0, spec.trust_range.1);
    let d = stream.next_in_range(spec.d_range.0, spec.d_range.1);
    ContextSample::new(rho, s, r, trust, d).expect("sampled fields lie within spec ranges")
}

/// One simulated observation: one universe at one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub replication: usize,
    pub universe_id: usize,
    /// Time step, 0-based internally (presentation layers add 1).
    pub t: usize,
    /// The post-action context that was scored.
    pub context: ContextSample,
    /// Id of the action selected at this step (shared across universes).
    pub action_id: u32,
    pub utility_total: f64,
    pub ci: f64,
    pub risk_band: RiskBand,
}

/// Runs the full simulation: for every replication and time step, samples
/// one context per universe from that universe's private stream, selects
/// the expected-utility-maximizing action over the universe set, and
/// records one row per universe.
///
/// Output is ordered by (replication, t, universe_id) and has exactly
/// `n_replications * n_universes * horizon` rows. Identical configs
/// produce bitwise-identical outputs on every platform.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let probabilities = universe_probabilities(cfg.n_universes, &cfg.probability_mode)?;
    let mut records = Vec::with_capacity(cfg.record_count());
    for replication in 0..cfg.n_replications {
        let mut streams: Vec<RngStream> = (0..cfg.n_universes)
            .map(|u| derive_stream(cfg.master_seed, replication as u64, u as u64))
            .collect();
        for t in 0..cfg.horizon {
            let contexts: Vec<ContextSample> = streams
                .iter_mut()
                .map(|stream| sample_context(stream, &cfg.sampling))
                .collect();
            let decision = select_action(&cfg.weights, &cfg.actions, &contexts, &probabilities)?;
            let chosen = decision.chosen();
            for outcome in &chosen.outcomes {
                records.push(TrajectoryRecord {
                    replication,
                    universe_id: outcome.universe_id,
                    t,
                    context: outcome.context,
                    action_id: chosen.action.id,
                    utility_total: outcome.utility.total,
                    ci: outcome.ci,
                    risk_band: classify_risk_band(outcome.context.r)?,
                });
            }
        }
    }
    Ok(records)
}

/// Aggregate of the utility values that fell into one summary cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryCell {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryCell {
    fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(Self {
            count,
            mean,
            min,
            max,
        })
    }
}

/// Utility summaries over time, grouped by risk band and by universe.
///
/// `band_series(band)[t]` is `None` when no record of that band exists at
/// step `t` — absent cells are never coerced to zero, which would corrupt
/// band means.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSummary {
    horizon: usize,
    bands: [Vec<Option<SummaryCell>>; 3],
    universes: Vec<Vec<Option<SummaryCell>>>,
}

impl BandSummary {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn n_universes(&self) -> usize {
        self.universes.len()
    }

    /// Per-step cells for one band; `None` where the band is empty.
    pub fn band_series(&self, band: RiskBand) -> &[Option<SummaryCell>] {
        let index = RiskBand::ALL.iter().position(|b| *b == band).unwrap();
        &self.bands[index]
    }

    /// Per-step cells for one universe (aggregated over replications).
    pub fn universe_series(&self, universe_id: usize) -> &[Option<SummaryCell>] {
        &self.universes[universe_id]
    }

    /// Mean utility over every record in the band, across all steps.
    pub fn band_mean(&self, band: RiskBand) -> Option<f64> {
        let mut total = 0.0;
        let mut count = 0usize;
        for cell in self.band_series(band).iter().flatten() {
            total += cell.mean * cell.count as f64;
            count += cell.count;
        }
        if count == 0 {
            None
        } else {
            Some(total / count as f64)
        }
    }
}

/// Groups records into per-band and per-universe utility series over time:
/// for every band and step, the mean/min/max utility of the records that
/// landed there, with empty cells reported as absent.
pub fn band_summary(records: &[TrajectoryRecord]) -> Result<BandSummary> {
    if records.is_empty() {
        return Err(Error::EmptyInput {
            what: "trajectory records",
        });
    }
    let horizon = records.iter().map(|rec| rec.t).max().unwrap() + 1;
    let n_universes = records.iter().map(|rec| rec.universe_id).max().unwrap() + 1;

    let mut band_values: [Vec<Vec<f64>>; 3] = std::array::from_fn(|_| vec![Vec::new(); horizon]);
    let mut universe_values: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); horizon]; n_universes];
    for rec in records {
        let band_index = RiskBand::ALL
            .iter()
            .position(|b| *b == rec.risk_band)
            .unwrap();
        band_values[band_index][rec.t].push(rec.utility_total);
        universe_values[rec.universe_id][rec.t].push(rec.utility_total);
    }

    let bands = std::array::from_fn(|b| {
        band_values[b]
            .iter()
            .map(|values| SummaryCell::from_values(values))
            .collect()
    });
    let universes = universe_values
        .iter()
        .map(|series| {
            series
                .iter()
                .map(|values| SummaryCell::from_values(values))
                .collect()
        })
        .collect();
    Ok(BandSummary {
        horizon,
        bands,
        universes,
    })
}
