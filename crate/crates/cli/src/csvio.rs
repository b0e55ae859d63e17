//! CSV serialization for trajectory records, band summaries, and
//! replication sweeps.
//!
//! Floating-point cells are printed with 17 significant digits
//! (`{:.16e}`), the minimum that makes every f64 round-trip bit-exactly,
//! so statistics computed from a re-parsed file equal statistics computed
//! from the in-memory records. Time steps are 1-based in files (they are
//! 0-based in memory).

use mpt_core::model::ContextSample;
use mpt_core::simulation::{classify_risk_band, BandSummary, RiskBand, TrajectoryRecord};

use crate::error::{CliError, Result};

/// Column order of the trajectory CSV.
pub const SIMULATE_COLUMNS: [&str; 12] = [
    "replication",
    "universe",
    "t",
    "rho",
    "s",
    "r",
    "trust",
    "d",
    "action",
    "utility",
    "ci_score",
    "risk_band",
];

/// Formats an f64 with 17 significant digits, enough to round-trip
/// bit-exactly through text.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

fn simulate_header() -> String {
    SIMULATE_COLUMNS.join(",")
}

/// Sorts records into file order: (replication, universe, t).
///
/// The simulation engine emits rows stepwise — (replication, t, universe)
/// — but every statistic downstream sums in row order, so analyses run on
/// in-memory records and analyses run on a written CSV agree to the last
/// bit only if both use the same order. Everything that feeds records to
/// the statistics goes through this first.
pub fn sort_records(records: &mut [TrajectoryRecord]) {
    records.sort_by_key(|rec| (rec.replication, rec.universe_id, rec.t));
}

/// Renders trajectory records as CSV, sorted by (replication, universe,
/// t) with 1-based time steps.
pub fn write_simulate_csv(records: &[TrajectoryRecord]) -> String {
    let mut sorted: Vec<&TrajectoryRecord> = records.iter().collect();
    sorted.sort_by_key(|rec| (rec.replication, rec.universe_id, rec.t));
    let mut out = String::with_capacity(64 + records.len() * 160);
    out.push_str(&simulate_header());
    out.push('\n');
    for rec in sorted {
        let c = &rec.context;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            rec.replication,
            rec.universe_id,
            rec.t + 1,
            float17(c.rho),
            float17(c.s),
            float17(c.r),
            float17(c.trust),
            float17(c.d_sens),
            rec.action_id,
            float17(rec.utility_total),
            float17(rec.ci),
            rec.risk_band,
        ));
    }
    out
}

fn parse_field<T: std::str::FromStr>(value: &str, column: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| {
        CliError::usage(format!(
            "line {line}: cannot parse {column} value '{value}'"
        ))
    })
}

/// Parses a trajectory CSV back into records.
///
/// The header must contain exactly the simulate columns in order; a
/// mismatch reports which expected columns are missing. Every row is
/// re-validated — context fields must be in range, the time step 1-based,
/// and the stored risk band consistent with the stored risk value — so a
/// hand-edited file cannot smuggle impossible data into the statistics.
pub fn parse_simulate_csv(text: &str) -> Result<Vec<TrajectoryRecord>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::usage("input CSV is empty"))?;
    let found: Vec<&str> = header.split(',').map(str::trim).collect();
    if found != SIMULATE_COLUMNS {
        let missing: Vec<&str> = SIMULATE_COLUMNS
            .iter()
            .filter(|col| !found.contains(*col))
            .copied()
            .collect();
        return Err(CliError::usage(if missing.is_empty() {
            format!(
                "unexpected CSV header: got '{header}', want '{}'",
                simulate_header()
            )
        } else {
            format!("input CSV is missing columns: {}", missing.join(", "))
        }));
    }

    let mut records = Vec::new();
    for (index, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = index + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != SIMULATE_COLUMNS.len() {
            return Err(CliError::usage(format!(
                "line {line_no}: expected {} fields, got {}",
                SIMULATE_COLUMNS.len(),
                fields.len()
            )));
        }
        let replication: usize = parse_field(fields[0], "replication", line_no)?;
        let universe_id: usize = parse_field(fields[1], "universe", line_no)?;
        let t_file: usize = parse_field(fields[2], "t", line_no)?;
        if t_file == 0 {
            return Err(CliError::usage(format!(
                "line {line_no}: time steps are 1-based in files, got 0"
            )));
        }
        let rho: f64 = parse_field(fields[3], "rho", line_no)?;
        let s: f64 = parse_field(fields[4], "s", line_no)?;
        let r: f64 = parse_field(fields[5], "r", line_no)?;
        let trust: f64 = parse_field(fields[6], "trust", line_no)?;
        let d: f64 = parse_field(fields[7], "d", line_no)?;
        let action_id: u32 = parse_field(fields[8], "action", line_no)?;
        let utility_total: f64 = parse_field(fields[9], "utility", line_no)?;
        let ci: f64 = parse_field(fields[10], "ci_score", line_no)?;
        let risk_band: RiskBand = fields[11]
            .parse()
            .map_err(|e: String| CliError::usage(format!("line {line_no}: {e}")))?;

        let context = ContextSample::new(rho, s, r, trust, d)
            .map_err(|e| CliError::usage(format!("line {line_no}: {e}")))?;
        let expected_band = classify_risk_band(context.r)
            .map_err(|e| CliError::usage(format!("line {line_no}: {e}")))?;
        if expected_band != risk_band {
            return Err(CliError::usage(format!(
                "line {line_no}: risk_band '{risk_band}' does not match r = {r} \
                 (expected '{expected_band}')"
            )));
        }
        if !utility_total.is_finite() || !ci.is_finite() {
            return Err(CliError::usage(format!(
                "line {line_no}: utility and ci_score must be finite"
            )));
        }
        records.push(TrajectoryRecord {
            replication,
            universe_id,
            t: t_file - 1,
            context,
            action_id,
            utility_total,
            ci,
            risk_band,
        });
    }
    if records.is_empty() {
        return Err(CliError::usage("input CSV contains no data rows"));
    }
    Ok(records)
}

/// Renders a band summary as `band,t,mean_utility,count` with 1-based
/// steps, one row per non-empty cell, bands in low/moderate/high order.
pub fn write_bands_csv(summary: &BandSummary) -> String {
    let mut out = String::from("band,t,mean_utility,count\n");
    for band in RiskBand::ALL {
        for (t, cell) in summary.band_series(band).iter().enumerate() {
            if let Some(cell) = cell {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    band,
                    t + 1,
                    float17(cell.mean),
                    cell.count
                ));
            }
        }
    }
    out
}

/// One hypothesis row of one replication sweep seed.
pub struct SweepRow {
    pub seed_index: u32,
    pub master_seed: u64,
    pub hypothesis: &'static str,
    pub pair: &'static str,
    /// `None` when the seed's sample was degenerate for this hypothesis.
    pub r: Option<f64>,
    pub p_value: Option<f64>,
    pub significant_05: Option<bool>,
}

/// Renders per-seed sweep rows as CSV. Degenerate cells are written as
/// `NA`, never as a number.
pub fn write_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("seed_index,master_seed,hypothesis,pair,r,p_value,significant_05\n");
    for row in rows {
        let fmt_opt = |v: Option<f64>| v.map(float17).unwrap_or_else(|| "NA".into());
        let sig = row
            .significant_05
            .map(|b| b.to_string())
            .unwrap_or_else(|| "NA".into());
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.seed_index,
            row.master_seed,
            row.hypothesis,
            row.pair,
            fmt_opt(row.r),
            fmt_opt(row.p_value),
            sig,
        ));
    }
    out
}

/// Aggregate row of a replication sweep: the r-distribution quantiles and
/// the fraction of seeds that came out significant for one hypothesis.
pub struct QuantileRow {
    pub hypothesis: &'static str,
    pub pair: &'static str,
    pub q025: f64,
    pub q500: f64,
    pub q975: f64,
    pub significant_fraction: f64,
    pub n_seeds: u32,
}

/// Renders the sweep aggregate as CSV.
pub fn write_quantiles_csv(rows: &[QuantileRow]) -> String {
    let mut out =
        String::from("hypothesis,pair,r_q025,r_median,r_q975,significant_fraction,n_seeds\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.hypothesis,
            row.pair,
            float17(row.q025),
            float17(row.q500),
            float17(row.q975),
            float17(row.significant_fraction),
            row.n_seeds,
        ));
    }
    out
}
