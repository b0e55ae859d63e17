//! The five commands: simulate, analyze, replicate, decide, oracle.
//!
//! Every command is deterministic given its flags, config, and seed. All
//! computation happens first; files are written once, at the end, and a
//! manifest goes next to every output so results are re-derivable.
//! Companion files extend the primary output path: `<out>.manifest.json`,
//! `<out>.bands.csv`, `<out>.quantiles.csv`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mpt_core::decision::{
    select_action, universe_probabilities, value_recursive, Action, ActionEffect, ActionSet,
    ProbabilityMode,
};
use mpt_core::model::ContextSample;
use mpt_core::simulation::{band_summary, run_simulation};
use mpt_core::stats::{
    analytic_r, quantile, run_hypotheses, HypothesisOutcome, Variable, HYPOTHESES,
};
use serde::{Deserialize, Serialize};

use crate::config::{load_config, resolve_seed, SeedSource};
use crate::csvio::{
    parse_simulate_csv, sort_records, write_bands_csv, write_quantiles_csv, write_simulate_csv,
    write_sweep_csv, QuantileRow, SweepRow,
};
use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

/// Derives a companion path by appending a suffix to the full output
/// path: `runs/sim.csv` + `.manifest.json` -> `runs/sim.csv.manifest.json`.
fn companion(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| CliError::io(path, e))
}

fn announce_seed(seed: u64, source: SeedSource) {
    if source == SeedSource::Generated {
        println!("no seed given; generated master seed {seed} (pass --seed {seed} to reproduce)");
    }
}

/// Runs the simulation and writes the trajectory CSV plus its manifest.
pub fn cmd_simulate(config_path: &Path, seed_flag: Option<u64>, out: &Path) -> Result<()> {
    let loaded = load_config(config_path)?;
    let (seed, source) = resolve_seed(seed_flag, loaded.config_seed);
    announce_seed(seed, source);
    let mut cfg = loaded.cfg;
    cfg.master_seed = seed;

    let records = run_simulation(&cfg)?;
    let manifest_path = companion(out, ".manifest.json");
    write_file(out, &write_simulate_csv(&records))?;
    let manifest = RunManifest {
        record_count: Some(records.len()),
        outputs: vec![display(out), display(&manifest_path)],
        ..RunManifest::new("simulate")
    }
    .with_seed(seed, source)
    .with_config(&cfg);
    manifest.write(&manifest_path)?;

    println!(
        "wrote {} records to {} (seed {seed})",
        records.len(),
        out.display()
    );
    Ok(())
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// One row of the JSON hypothesis report. Degenerate rows carry a status
/// instead of numbers; computed rows carry the full statistics.
#[derive(Debug, Serialize)]
#[serde(untagged)]
enum ReportRow {
    Computed {
        name: &'static str,
        pair: &'static str,
        r: f64,
        n: usize,
        p_value: f64,
        ci_low: f64,
        ci_high: f64,
        significant_05: bool,
    },
    Degenerate {
        name: &'static str,
        pair: &'static str,
        status: &'static str,
        constant_series: &'static str,
    },
}

impl ReportRow {
    fn from_outcome(outcome: &HypothesisOutcome) -> Self {
        match outcome {
            HypothesisOutcome::Computed(res) => ReportRow::Computed {
                name: res.name,
                pair: res.pair,
                r: res.r,
                n: res.n,
                p_value: res.p_value,
                ci_low: res.ci_low,
                ci_high: res.ci_high,
                significant_05: res.significant_05,
            },
            HypothesisOutcome::Degenerate { name, pair, series } => ReportRow::Degenerate {
                name,
                pair,
                status: "degenerate_variance",
                constant_series: series,
            },
        }
    }
}

/// Display form of a p-value: four significant figures, scientific
/// notation below 1e-3 (presentation only — files carry full precision).
fn format_p(p: f64) -> String {
    if p == 0.0 {
        "0".to_string()
    } else if p < 1e-3 {
        format!("{p:.3e}")
    } else {
        format!("{p:.4}")
    }
}

fn print_report_table(outcomes: &[HypothesisOutcome]) {
    println!(
        "{:<4} {:<30} {:>8} {:>11} {:>20} {:>6} {:>12}",
        "row", "pair", "r", "p_value", "95% CI", "n", "significant"
    );
    for outcome in outcomes {
        match outcome {
            HypothesisOutcome::Computed(res) => {
                println!(
                    "{:<4} {:<30} {:>8.4} {:>11} {:>20} {:>6} {:>12}",
                    res.name,
                    res.pair,
                    res.r,
                    format_p(res.p_value),
                    format!("[{:.4}, {:.4}]", res.ci_low, res.ci_high),
                    res.n,
                    if res.significant_05 { "yes" } else { "no" },
                );
            }
            HypothesisOutcome::Degenerate { name, pair, series } => {
                println!("{name:<4} {pair:<30} degenerate: series '{series}' is constant");
            }
        }
    }
}

/// Reads a trajectory CSV, runs the hypothesis suite, and writes the JSON
/// report, the band-summary CSV, and a manifest.
pub fn cmd_analyze(input: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    let records = parse_simulate_csv(&text)?;
    let outcomes = run_hypotheses(&records)?;
    let summary = band_summary(&records)?;

    let rows: Vec<ReportRow> = outcomes.iter().map(ReportRow::from_outcome).collect();
    let mut report = serde_json::to_string_pretty(&rows).expect("report serialization cannot fail");
    report.push('\n');

    let bands_path = companion(out, ".bands.csv");
    let manifest_path = companion(out, ".manifest.json");
    write_file(out, &report)?;
    write_file(&bands_path, &write_bands_csv(&summary))?;
    RunManifest {
        input: Some(display(input)),
        record_count: Some(records.len()),
        outputs: vec![display(out), display(&bands_path), display(&manifest_path)],
        ..RunManifest::new("analyze")
    }
    .write(&manifest_path)?;

    print_report_table(&outcomes);
    println!(
        "report: {} | bands: {} | {} records",
        out.display(),
        bands_path.display(),
        records.len()
    );
    Ok(())
}

/// Re-runs the study under `n_seeds` consecutive master seeds and writes
/// the per-seed hypothesis results plus aggregate r-quantiles.
pub fn cmd_replicate(
    config_path: &Path,
    n_seeds: u32,
    seed_flag: Option<u64>,
    out: &Path,
) -> Result<()> {
    if n_seeds == 0 {
        return Err(CliError::usage("--seeds must be at least 1"));
    }
    let loaded = load_config(config_path)?;
    let (base_seed, source) = resolve_seed(seed_flag, loaded.config_seed);
    announce_seed(base_seed, source);
    let mut cfg = loaded.cfg;

    let mut sweep_rows = Vec::with_capacity(n_seeds as usize * HYPOTHESES.len());
    let mut r_samples: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    let mut significant_counts: BTreeMap<&'static str, u32> = BTreeMap::new();
    for k in 0..n_seeds {
        let master_seed = base_seed.wrapping_add(k as u64);
        cfg.master_seed = master_seed;
        let mut records = run_simulation(&cfg)?;
        // File order, so each seed's statistics match what `simulate`
        // followed by `analyze` would report bit for bit.
        sort_records(&mut records);
        for outcome in run_hypotheses(&records)? {
            let row = match &outcome {
                HypothesisOutcome::Computed(res) => {
                    r_samples.entry(res.name).or_default().push(res.r);
                    if res.significant_05 {
                        *significant_counts.entry(res.name).or_insert(0) += 1;
                    }
                    SweepRow {
                        seed_index: k,
                        master_seed,
                        hypothesis: res.name,
                        pair: res.pair,
                        r: Some(res.r),
                        p_value: Some(res.p_value),
                        significant_05: Some(res.significant_05),
                    }
                }
                HypothesisOutcome::Degenerate { name, pair, .. } => SweepRow {
                    seed_index: k,
                    master_seed,
                    hypothesis: name,
                    pair,
                    r: None,
                    p_value: None,
                    significant_05: None,
                },
            };
            sweep_rows.push(row);
        }
    }

    let mut quantile_rows = Vec::with_capacity(HYPOTHESES.len());
    for spec in HYPOTHESES {
        let rs = r_samples.get(spec.name).map(Vec::as_slice).unwrap_or(&[]);
        if rs.is_empty() {
            return Err(CliError::usage(format!(
                "{}: every seed produced a degenerate sample; the r distribution is empty",
                spec.name
            )));
        }
        quantile_rows.push(QuantileRow {
            hypothesis: spec.name,
            pair: spec.pair,
            q025: quantile(rs, 0.025)?,
            q500: quantile(rs, 0.5)?,
            q975: quantile(rs, 0.975)?,
            significant_fraction: f64::from(
                significant_counts.get(spec.name).copied().unwrap_or(0),
            ) / f64::from(n_seeds),
            n_seeds,
        });
    }

    let quantiles_path = companion(out, ".quantiles.csv");
    let manifest_path = companion(out, ".manifest.json");
    write_file(out, &write_sweep_csv(&sweep_rows))?;
    write_file(&quantiles_path, &write_quantiles_csv(&quantile_rows))?;
    RunManifest {
        n_seeds: Some(n_seeds),
        record_count: Some(sweep_rows.len()),
        outputs: vec![
            display(out),
            display(&quantiles_path),
            display(&manifest_path),
        ],
        ..RunManifest::new("replicate")
    }
    .with_seed(base_seed, source)
    .with_config(&cfg)
    .write(&manifest_path)?;

    println!(
        "{:<4} {:>9} {:>9} {:>9} {:>13}",
        "row", "r_q025", "r_median", "r_q975", "sig_fraction"
    );
    for row in &quantile_rows {
        println!(
            "{:<4} {:>9.4} {:>9.4} {:>9.4} {:>13.3}",
            row.hypothesis, row.q025, row.q500, row.q975, row.significant_fraction
        );
    }
    println!(
        "swept {n_seeds} seeds from base {base_seed}: {} | quantiles: {}",
        out.display(),
        quantiles_path.display()
    );
    Ok(())
}

/// The decision query: per-universe contexts, optionally with an action
/// set and universe probability weights; anything omitted falls back to
/// the config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    universes: Vec<StateContext>,
    actions: Option<Vec<StateAction>>,
    /// Probability weights over the universes; normalized to sum to 1.
    probabilities: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateContext {
    rho: f64,
    s: f64,
    r: f64,
    trust: f64,
    d_sens: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateAction {
    id: u32,
    label: Option<String>,
    delta_r: Option<f64>,
    delta_s: Option<f64>,
    delta_trust: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ActionValueJson {
    id: u32,
    label: String,
    expected_utility: f64,
}

#[derive(Debug, Serialize)]
struct DecisionJson {
    chosen_action_id: u32,
    chosen_label: String,
    expected_utility: f64,
    discounted_value: f64,
    lambda_discount: f64,
    horizon: usize,
    actions: Vec<ActionValueJson>,
}

/// Evaluates every action against the supplied universes and prints the
/// argmax choice with its expected utility and discounted value (the
/// chosen expected utility held over the configured horizon).
pub fn cmd_decide(config_path: &Path, state_path: &Path) -> Result<()> {
    let loaded = load_config(config_path)?;
    let cfg = loaded.cfg;
    let text = fs::read_to_string(state_path).map_err(|e| CliError::io(state_path, e))?;
    let state: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", state_path.display())))?;

    if state.universes.is_empty() {
        return Err(CliError::usage(format!(
            "{}: universes must not be empty",
            state_path.display()
        )));
    }
    let universes: Vec<ContextSample> = state
        .universes
        .iter()
        .enumerate()
        .map(|(index, c)| {
            ContextSample::new(c.rho, c.s, c.r, c.trust, c.d_sens).map_err(|e| {
                CliError::usage(format!("{}: universe {index}: {e}", state_path.display()))
            })
        })
        .collect::<Result<_>>()?;

    let actions = match state.actions {
        None => cfg.actions.clone(),
        Some(raw) => {
            let actions: Vec<Action> = raw
                .into_iter()
                .map(|a| {
                    Action::new(
                        a.id,
                        a.label.unwrap_or_else(|| format!("action {}", a.id)),
                        ActionEffect {
                            delta_r: a.delta_r.unwrap_or(0.0),
                            delta_s: a.delta_s.unwrap_or(0.0),
                            delta_trust: a.delta_trust.unwrap_or(0.0),
                        },
                    )
                })
                .collect();
            ActionSet::new(actions)
                .map_err(|e| CliError::usage(format!("{}: {e}", state_path.display())))?
        }
    };

    let mode = match state.probabilities {
        Some(weights) => ProbabilityMode::Weighted(weights),
        None => cfg.probability_mode.clone(),
    };
    let probabilities = universe_probabilities(universes.len(), &mode)
        .map_err(|e| CliError::usage(format!("{}: {e}", state_path.display())))?;

    let decision = select_action(&cfg.weights, &actions, &universes, &probabilities)?;
    let chosen = decision.chosen();
    let per_step = vec![chosen.expected_utility; cfg.horizon];
    let value = value_recursive(&cfg.weights, &per_step)?;

    let output = DecisionJson {
        chosen_action_id: chosen.action.id,
        chosen_label: chosen.action.label.clone(),
        expected_utility: chosen.expected_utility,
        discounted_value: value.discounted_value,
        lambda_discount: cfg.weights.lambda_discount,
        horizon: cfg.horizon,
        actions: decision
            .evaluations
            .iter()
            .map(|eval| ActionValueJson {
                id: eval.action.id,
                label: eval.action.label.clone(),
                expected_utility: eval.expected_utility,
            })
            .collect(),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("decision serialization cannot fail")
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct OracleJson {
    rho: f64,
    s: f64,
    r: f64,
    trust: f64,
    d_sens: f64,
}

/// Prints the closed-form correlations between each sampled variable and
/// utility implied by the config's weights and sampling ranges.
///
/// Refuses configs the closed form does not cover: every action must
/// have zero effect and the integrity weight must be zero, otherwise
/// utility is not a plain weighted sum of the sampled variables.
pub fn cmd_oracle(config_path: &Path) -> Result<()> {
    let loaded = load_config(config_path)?;
    let cfg = loaded.cfg;
    if !cfg.actions.all_zero_effect() {
        return Err(CliError::usage(
            "the analytic oracle requires zero-effect actions: action deltas change \
             per-universe contexts and break the closed-form correlation",
        ));
    }
    if cfg.weights.theta != 0.0 {
        return Err(CliError::usage(
            "the analytic oracle requires theta = 0: the integrity term makes utility \
             a nonlinear function of the sampled variables",
        ));
    }
    let value = |variable: Variable| analytic_r(variable, &cfg.weights, &cfg.sampling);
    let output = OracleJson {
        rho: value(Variable::Rho)?,
        s: value(Variable::S)?,
        r: value(Variable::R)?,
        trust: value(Variable::Trust)?,
        d_sens: value(Variable::DSens)?,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("oracle serialization cannot fail")
    );
    Ok(())
}
