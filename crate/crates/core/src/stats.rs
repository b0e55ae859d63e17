//! Inferential statistics: Pearson correlation, exact two-sided p-values
//! via the Student-t distribution, Fisher-z 95% confidence intervals, the
//! five-hypothesis suite over simulated records, and a closed-form
//! correlation oracle used to cross-check the Monte Carlo engine.

pub mod special;

use crate::error::{Error, Result};
use crate::model::Weights;
use crate::simulation::{SamplingSpec, TrajectoryRecord};
use special::two_sided_p_from_t;

/// 97.5% standard-normal quantile, fixed to six decimals so confidence
/// bounds are bit-stable across platforms and libm versions.
pub const Z_975: f64 = 1.959964;

/// Pearson product-moment correlation of two equal-length series.
///
/// Requires at least 3 points and nonzero variance in both series; the
/// result is clamped into `[-1, 1]` to absorb last-ulp rounding.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "correlation series",
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::InsufficientSamples { n: x.len(), min: 3 });
    }
    for (field, series) in [("x", x), ("y", y)] {
        for &value in series {
            if !value.is_finite() {
                return Err(Error::NonFinite { field, value });
            }
        }
        // Constant series must be caught exactly: the accumulated mean of
        // n identical values need not equal them bit-for-bit, which would
        // leave a spurious, roundoff-sized variance below.
        if series.iter().all(|&value| value == series[0]) {
            return Err(Error::DegenerateVariance { series: field });
        }
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateVariance { series: "x" });
    }
    if syy == 0.0 {
        return Err(Error::DegenerateVariance { series: "y" });
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn validate_r_n(r: f64, n: usize) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFinite {
            field: "r",
            value: r,
        });
    }
    if r.abs() > 1.0 {
        return Err(Error::OutOfRange {
            field: "r",
            value: r,
            lo: -1.0,
            hi: 1.0,
        });
    }
    if n < 4 {
        return Err(Error::InsufficientSamples { n, min: 4 });
    }
    Ok(())
}

/// Two-sided p-value for a Pearson correlation of `r` over `n` samples.
///
/// Transforms to `t = r * sqrt((n-2) / (1 - r^2))` and evaluates the
/// two-sided t tail with `n - 2` degrees of freedom directly in the tail
/// (no `1 - CDF` cancellation). A perfect `|r| = 1` yields exactly 0.
pub fn p_value_two_sided(r: f64, n: usize) -> Result<f64> {
    validate_r_n(r, n)?;
    if r.abs() == 1.0 {
        return Ok(0.0);
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    two_sided_p_from_t(t, df)
}

/// 95% confidence interval for a correlation via the Fisher z-transform:
/// `tanh(atanh(r) -/+ 1.959964 / sqrt(n - 3))`.
///
/// Rejects `|r| = 1`, where the transform diverges.
pub fn fisher_ci_95(r: f64, n: usize) -> Result<(f64, f64)> {
    validate_r_n(r, n)?;
    if r.abs() == 1.0 {
        return Err(Error::CorrelationAtUnity { r });
    }
    let z = r.atanh();
    let half_width = Z_975 / ((n - 3) as f64).sqrt();
    Ok(((z - half_width).tanh(), (z + half_width).tanh()))
}

/// The context variables a hypothesis can pair with utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Rho,
    S,
    R,
    Trust,
    DSens,
    Ci,
}

impl Variable {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variable::Rho => "rho",
            Variable::S => "s",
            Variable::R => "r",
            Variable::Trust => "trust",
            Variable::DSens => "d_sens",
            Variable::Ci => "ci",
        }
    }
}

impl std::fmt::Display for Variable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of the hypothesis suite: which variable is tested against
/// utility, under what name, and with what expected direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisSpec {
    pub name: &'static str,
    /// Human-readable pairing label for reports.
    pub pair: &'static str,
    pub variable: Variable,
    /// The direction the theory predicts; informational only (tests are
    /// two-sided).
    pub expected_sign: ExpectedSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedSign {
    Positive,
    Negative,
    None,
}

/// The five standard hypotheses, in report order: privacy preference,
/// contextual risk, trust, security, and integrity score, each against
/// the utility total.
pub const HYPOTHESES: [HypothesisSpec; 5] = [
    HypothesisSpec {
        name: "H1",
        pair: "privacy_preference-utility",
        variable: Variable::Rho,
        expected_sign: ExpectedSign::Positive,
    },
    HypothesisSpec {
        name: "H2",
        pair: "contextual_risk-utility",
        variable: Variable::R,
        expected_sign: ExpectedSign::Negative,
    },
    HypothesisSpec {
        name: "H3",
        pair: "trust-utility",
        variable: Variable::Trust,
        expected_sign: ExpectedSign::Positive,
    },
    HypothesisSpec {
        name: "H4",
        pair: "security-utility",
        variable: Variable::S,
        expected_sign: ExpectedSign::Positive,
    },
    HypothesisSpec {
        name: "H5",
        pair: "contextual_integrity-utility",
        variable: Variable::Ci,
        expected_sign: ExpectedSign::Positive,
    },
];

/// A fully computed hypothesis test.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisResult {
    pub name: &'static str,
    pub pair: &'static str,
    pub r: f64,
    pub n: usize,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// True exactly when `p_value < 0.05`.
    pub significant_05: bool,
}

/// Outcome of one hypothesis: either a full result or a report that the
/// test was impossible because one series had no variance. A degenerate
/// row never aborts the rest of the suite.
#[derive(Debug, Clone, PartialEq)]
pub enum HypothesisOutcome {
    Computed(HypothesisResult),
    Degenerate {
        name: &'static str,
        pair: &'static str,
        /// Which series was constant ("x" is the context variable, "y"
        /// the utility).
        series: &'static str,
    },
}

impl HypothesisOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            HypothesisOutcome::Computed(res) => res.name,
            HypothesisOutcome::Degenerate { name, .. } => name,
        }
    }

    pub fn pair(&self) -> &'static str {
        match self {
            HypothesisOutcome::Computed(res) => res.pair,
            HypothesisOutcome::Degenerate { pair, .. } => pair,
        }
    }

    pub fn as_computed(&self) -> Option<&HypothesisResult> {
        match self {
            HypothesisOutcome::Computed(res) => Some(res),
            HypothesisOutcome::Degenerate { .. } => None,
        }
    }
}

fn extract(records: &[TrajectoryRecord], variable: Variable) -> Vec<f64> {
    records
        .iter()
        .map(|rec| match variable {
            Variable::Rho => rec.context.rho,
            Variable::S => rec.context.s,
            Variable::R => rec.context.r,
            Variable::Trust => rec.context.trust,
            Variable::DSens => rec.context.d_sens,
            Variable::Ci => rec.ci,
        })
        .collect()
}

/// Runs the five-hypothesis suite over a pooled record sample.
///
/// All records — every replication, universe, and time step — form one
/// flat sample of size `n`. Each hypothesis correlates its variable with
/// `utility_total`, attaches the exact two-sided p-value and the Fisher
/// 95% interval, and flags significance at 0.05. A constant series yields
/// a degenerate outcome for that row only. When a correlation comes out
/// exactly `|r| = 1` (e.g. utility engineered to copy a variable), the
/// p-value is exactly 0 and the interval collapses to the point `r`,
/// since the Fisher transform diverges there.
pub fn run_hypotheses(records: &[TrajectoryRecord]) -> Result<Vec<HypothesisOutcome>> {
    if records.is_empty() {
        return Err(Error::EmptyInput {
            what: "trajectory records",
        });
    }
    let n = records.len();
    if n < 4 {
        return Err(Error::InsufficientSamples { n, min: 4 });
    }
    let utility: Vec<f64> = records.iter().map(|rec| rec.utility_total).collect();
    let mut outcomes = Vec::with_capacity(HYPOTHESES.len());
    for spec in HYPOTHESES {
        let x = extract(records, spec.variable);
        let r = match pearson_r(&x, &utility) {
            Ok(r) => r,
            Err(Error::DegenerateVariance { series }) => {
                outcomes.push(HypothesisOutcome::Degenerate {
                    name: spec.name,
                    pair: spec.pair,
                    series,
                });
                continue;
            }
            Err(other) => return Err(other),
        };
        let p_value = p_value_two_sided(r, n)?;
        let (ci_low, ci_high) = if r.abs() == 1.0 {
            (r, r)
        } else {
            fisher_ci_95(r, n)?
        };
        outcomes.push(HypothesisOutcome::Computed(HypothesisResult {
            name: spec.name,
            pair: spec.pair,
            r,
            n,
            p_value,
            ci_low,
            ci_high,
            significant_05: p_value < 0.05,
        }));
    }
    Ok(outcomes)
}

/// Closed-form correlation between one sampled context variable and the
/// utility total, for independent uniform sampling with zero-effect
/// actions and no integrity term.
///
/// Utility is then a weighted sum of independent uniforms, so
/// `corr(X_i, U) = w_i * sigma_i / sqrt(sum_j w_j^2 sigma_j^2)` with
/// `sigma = (hi - lo) / sqrt(12)` and the risk weight entering as
/// `-gamma`. The integrity score is a nonlinear ratio with no closed
/// form and is rejected; cross-check it by Monte Carlo instead.
pub fn analytic_r(variable: Variable, weights: &Weights, spec: &SamplingSpec) -> Result<f64> {
    if variable == Variable::Ci {
        return Err(Error::UnsupportedOracle {
            reason: "the integrity score is a nonlinear ratio with no closed-form correlation",
        });
    }
    if weights.theta != 0.0 {
        return Err(Error::UnsupportedOracle {
            reason: "utility must not include the integrity term (theta must be 0)",
        });
    }
    let sigma = |range: (f64, f64)| (range.1 - range.0) / 12f64.sqrt();
    // (variable, weight as it enters the utility sum, standard deviation)
    let components = [
        (Variable::Rho, weights.alpha, sigma(spec.rho_range)),
        (Variable::S, weights.beta, sigma(spec.s_range)),
        (Variable::R, -weights.gamma, sigma(spec.r_range)),
        (Variable::Trust, weights.delta, sigma(spec.trust_range)),
        (Variable::DSens, weights.zeta, sigma(spec.d_range)),
    ];
    let utility_var: f64 = components.iter().map(|(_, w, s)| (w * s) * (w * s)).sum();
    if utility_var <= 0.0 {
        return Err(Error::DegenerateVariance { series: "utility" });
    }
    let (_, w_i, sigma_i) = components
        .iter()
        .find(|(v, _, _)| *v == variable)
        .expect("every non-ci variable has a component");
    if *sigma_i == 0.0 {
        return Err(Error::DegenerateVariance {
            series: variable.as_str(),
        });
    }
    Ok(w_i * sigma_i / utility_var.sqrt())
}

/// Quantile by linear interpolation between order statistics (the common
/// "type 7" rule): at fraction `q` of the way through `n` sorted values,
/// position `(n-1)*q` interpolates its two neighbors.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput {
            what: "quantile data",
        });
    }
    if !q.is_finite() {
        return Err(Error::NonFinite {
            field: "q",
            value: q,
        });
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange {
            field: "q",
            value: q,
            lo: 0.0,
            hi: 1.0,
        });
    }
    for &value in values {
        if !value.is_finite() {
            return Err(Error::NonFinite {
                field: "quantile data",
                value,
            });
        }
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let position = (sorted.len() - 1) as f64 * q;
    let lower = position.floor() as usize;
    let fraction = position - lower as f64;
    if fraction == 0.0 {
        Ok(sorted[lower])
    } else {
        Ok(sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]))
    }
}
