//! Pointwise scoring model: the weighted utility of a privacy action in a
//! sampled context, and the contextual-integrity score of that context.
//!
//! Both scores are pure functions over validated value types. `Weights`
//! carries the six tunable coefficients plus the discount factor used by
//! the recursive value function; `ContextSample` is one realization of the
//! five normalized context variables. All arithmetic is plain `f64` with
//! no intermediate rounding.

use crate::error::{Error, Result};

/// Tunable coefficients of the utility function plus the discount factor.
///
/// `gamma` is stored as a magnitude: the risk term enters the utility as
/// `-gamma * r`, so a positive `gamma` means risk reduces utility. The
/// config layer normalizes signed input into this convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    /// Privacy-preference coefficient.
    pub alpha: f64,
    /// Security-level coefficient.
    pub beta: f64,
    /// Contextual-risk coefficient (applied with a leading minus sign).
    pub gamma: f64,
    /// Trust coefficient.
    pub delta: f64,
    /// Demographic-sensitivity coefficient.
    pub zeta: f64,
    /// Contextual-integrity coefficient.
    pub theta: f64,
    /// Discount factor for future value, in `[0, 1]`.
    pub lambda_discount: f64,
}

impl Weights {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        zeta: f64,
        theta: f64,
        lambda_discount: f64,
    ) -> Result<Self> {
        for (field, value) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
            ("zeta", zeta),
            ("theta", theta),
            ("lambda_discount", lambda_discount),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { field, value });
            }
        }
        if !(0.0..=1.0).contains(&lambda_discount) {
            return Err(Error::OutOfRange {
                field: "lambda_discount",
                value: lambda_discount,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
            zeta,
            theta,
            lambda_discount,
        })
    }

    /// The default study coefficients: alpha 1.0, beta 0.8, gamma 0.9,
    /// delta 0.6, zeta 0.5, with theta and the discount at zero.
    pub fn replication_defaults() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.8,
            gamma: 0.9,
            delta: 0.6,
            zeta: 0.5,
            theta: 0.0,
            lambda_discount: 0.0,
        }
    }

    /// Same coefficients scaled by `k`; the discount factor is untouched.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            alpha: self.alpha * k,
            beta: self.beta * k,
            gamma: self.gamma * k,
            delta: self.delta * k,
            zeta: self.zeta * k,
            theta: self.theta * k,
            lambda_discount: self.lambda_discount,
        }
    }
}

/// One realization of the five context variables, each normalized to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextSample {
    /// Privacy preference.
    pub rho: f64,
    /// Security level.
    pub s: f64,
    /// Contextual risk.
    pub r: f64,
    /// Trust in the system.
    pub trust: f64,
    /// Demographic sensitivity, already reduced to a scalar.
    pub d_sens: f64,
}

impl ContextSample {
    pub fn new(rho: f64, s: f64, r: f64, trust: f64, d_sens: f64) -> Result<Self> {
        for (field, value) in [
            ("rho", rho),
            ("s", s),
            ("r", r),
            ("trust", trust),
            ("d_sens", d_sens),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { field, value });
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    field,
                    value,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
        }
        Ok(Self {
            rho,
            s,
            r,
            trust,
            d_sens,
        })
    }
}

/// One named demographic attribute with its normalized value and weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DemographicAttribute {
    pub name: String,
    /// Normalized attribute score in `[0, 1]`.
    pub value: f64,
    /// Nonnegative aggregation weight.
    pub weight: f64,
}

/// An ordered collection of demographic attributes.
///
/// The reduction to a scalar happens once, at sampling time, via
/// [`g_demographic`]; the utility formula only ever sees the scalar.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DemographicProfile {
    attributes: Vec<DemographicAttribute>,
}

impl DemographicProfile {
    /// Builds a profile from `(name, value, weight)` triples.
    ///
    /// Values must lie in `[0, 1]`, weights must be nonnegative, and a
    /// non-empty profile must have a positive weight total.
    pub fn new<I, S>(attributes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64, f64)>,
        S: Into<String>,
    {
        let attributes: Vec<DemographicAttribute> = attributes
            .into_iter()
            .map(|(name, value, weight)| DemographicAttribute {
                name: name.into(),
                value,
                weight,
            })
            .collect();
        for (index, attr) in attributes.iter().enumerate() {
            if !attr.value.is_finite() {
                return Err(Error::NonFinite {
                    field: "attribute value",
                    value: attr.value,
                });
            }
            if !(0.0..=1.0).contains(&attr.value) {
                return Err(Error::OutOfRange {
                    field: "attribute value",
                    value: attr.value,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
            if !attr.weight.is_finite() {
                return Err(Error::NonFinite {
                    field: "attribute weight",
                    value: attr.weight,
                });
            }
            if attr.weight < 0.0 {
                return Err(Error::NegativeWeight {
                    what: "demographic attribute",
                    index,
                    value: attr.weight,
                });
            }
        }
        if !attributes.is_empty() {
            let sum: f64 = attributes.iter().map(|a| a.weight).sum();
            if sum <= 0.0 {
                return Err(Error::NonPositiveWeightSum {
                    what: "demographic attribute",
                    sum,
                });
            }
        }
        Ok(Self { attributes })
    }

    pub fn attributes(&self) -> &[DemographicAttribute] {
        &self.attributes
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }
}

/// Weight-normalized average of the profile's attribute scores.
///
/// Returns `sum(w_i * v_i) / sum(w_i)`, or 0 for an empty profile
/// (no demographic influence). The result stays in `[0, 1]`.
pub fn g_demographic(profile: &DemographicProfile) -> f64 {
    if profile.is_empty() {
        return 0.0;
    }
    let weighted: f64 = profile.attributes.iter().map(|a| a.weight * a.value).sum();
    let total: f64 = profile.attributes.iter().map(|a| a.weight).sum();
    weighted / total
}

/// Per-term decomposition of one utility evaluation.
///
/// `total` is the plain left-to-right sum of the six terms; it is stored
/// rather than recomputed so that the decomposition and the total can
/// never drift apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityBreakdown {
    pub term_privacy: f64,
    pub term_security: f64,
    pub term_risk: f64,
    pub term_trust: f64,
    pub term_demographic: f64,
    pub term_ci: f64,
    pub total: f64,
}

/// Utility of a privacy action in context:
/// `alpha*rho + beta*s - gamma*r + delta*trust + zeta*d_sens + theta*ci`.
///
/// `ci` is the contextual-integrity score of the (post-action) context,
/// normally produced by [`ci_score`]; it is expected to be nonnegative.
pub fn utility(w: &Weights, c: &ContextSample, ci: f64) -> UtilityBreakdown {
    debug_assert!(ci >= 0.0, "ci score must be nonnegative, got {ci}");
    let term_privacy = w.alpha * c.rho;
    let term_security = w.beta * c.s;
    let term_risk = -(w.gamma * c.r);
    let term_trust = w.delta * c.trust;
    let term_demographic = w.zeta * c.d_sens;
    let term_ci = w.theta * ci;
    let total = term_privacy + term_security + term_risk + term_trust + term_demographic + term_ci;
    UtilityBreakdown {
        term_privacy,
        term_security,
        term_risk,
        term_trust,
        term_demographic,
        term_ci,
        total,
    }
}

/// Contextual-integrity score `(rho + s + trust + d_sens) / (1 + r)`.
///
/// Rises with privacy preference, security, trust, and demographic
/// sensitivity; falls with risk. For a valid context the denominator is
/// at least 1, so the result lies in `[0, 4]`.
pub fn ci_score(c: &ContextSample) -> f64 {
    (c.rho + c.s + c.trust + c.d_sens) / (1.0 + c.r)
}
