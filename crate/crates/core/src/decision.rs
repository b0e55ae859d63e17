//! Decision layer: candidate privacy actions, their outcomes across a set
//! of hypothetical universes, probability-weighted expected utility, and
//! argmax action selection with a discounted multi-step value function.
//!
//! A "universe" here is one fully specified context the decision maker
//! entertains. The decision rule evaluates every candidate action against
//! every universe on that universe's post-action context, weights the
//! per-universe utilities by the universe probabilities, and picks the
//! action with the highest expected utility (lowest id wins ties, so the
//! choice is deterministic and independent of declaration order).

use crate::error::{Error, Result};
use crate::model::{ci_score, utility, ContextSample, UtilityBreakdown, Weights};

/// How an action shifts the mutable context variables, as additive deltas
/// in `[-1, 1]`.
///
/// Only risk, security, and trust can be acted upon; privacy preference
/// and demographic sensitivity are user traits, not system state, and no
/// action modifies them. Shifted variables are clamped back into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ActionEffect {
    pub delta_r: f64,
    pub delta_s: f64,
    pub delta_trust: f64,
}

impl ActionEffect {
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("delta_r", self.delta_r),
            ("delta_s", self.delta_s),
            ("delta_trust", self.delta_trust),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { field, value });
            }
            if !(-1.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    field,
                    value,
                    lo: -1.0,
                    hi: 1.0,
                });
            }
        }
        Ok(())
    }

    /// True when every delta is exactly zero, i.e. the action leaves the
    /// context untouched.
    pub fn is_zero(&self) -> bool {
        self.delta_r == 0.0 && self.delta_s == 0.0 && self.delta_trust == 0.0
    }
}

/// One candidate privacy action.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    /// Numeric identifier, unique within an [`ActionSet`]; ties in
    /// expected utility resolve to the lowest id.
    pub id: u32,
    /// Human-readable label for reports.
    pub label: String,
    pub effect: ActionEffect,
}

impl Action {
    pub fn new(id: u32, label: impl Into<String>, effect: ActionEffect) -> Self {
        Self {
            id,
            label: label.into(),
            effect,
        }
    }

    /// An action with no effect on the context.
    pub fn zero_effect(id: u32, label: impl Into<String>) -> Self {
        Self::new(id, label, ActionEffect::default())
    }
}

/// A non-empty ordered set of candidate actions with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSet {
    actions: Vec<Action>,
}

impl ActionSet {
    pub fn new(actions: Vec<Action>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::EmptyActionSet);
        }
        let mut seen = std::collections::HashSet::new();
        for action in &actions {
            action.effect.validate()?;
            if !seen.insert(action.id) {
                return Err(Error::DuplicateActionId { id: action.id });
            }
        }
        Ok(Self { actions })
    }

    /// The study default: a single zero-effect "observe" action, so
    /// trajectories depend only on the sampled contexts.
    pub fn replication_default() -> Self {
        Self {
            actions: vec![Action::zero_effect(0, "observe")],
        }
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    /// Always false: the constructor rejects empty sets.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when every action in the set has zero effect.
    pub fn all_zero_effect(&self) -> bool {
        self.actions.iter().all(|a| a.effect.is_zero())
    }
}

/// How probability mass is spread over the hypothetical universes.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbabilityMode {
    /// Every universe gets mass `1/n`.
    Uniform,
    /// Explicit nonnegative weights, normalized to sum to 1.
    Weighted(Vec<f64>),
}

/// Probability vector over `n_universes` under the given mode.
///
/// Uniform mode assigns `1/n` to each universe. Weighted mode checks that
/// the weight list matches `n_universes`, contains only finite nonnegative
/// entries with a positive total, and then normalizes it. Either way the
/// result sums to 1 within one part in 1e12.
pub fn universe_probabilities(n_universes: usize, mode: &ProbabilityMode) -> Result<Vec<f64>> {
    if n_universes == 0 {
        return Err(Error::ZeroCount { field: "universes" });
    }
    match mode {
        ProbabilityMode::Uniform => Ok(vec![1.0 / n_universes as f64; n_universes]),
        ProbabilityMode::Weighted(weights) => {
            if weights.len() != n_universes {
                return Err(Error::LengthMismatch {
                    what: "universe weights",
                    expected: n_universes,
                    actual: weights.len(),
                });
            }
            for (index, &w) in weights.iter().enumerate() {
                if !w.is_finite() {
                    return Err(Error::NonFinite {
                        field: "universe weight",
                        value: w,
                    });
                }
                if w < 0.0 {
                    return Err(Error::NegativeWeight {
                        what: "universe",
                        index,
                        value: w,
                    });
                }
            }
            let total: f64 = weights.iter().sum();
            if total <= 0.0 {
                return Err(Error::NonPositiveWeightSum {
                    what: "universe",
                    sum: total,
                });
            }
            Ok(weights.iter().map(|w| w / total).collect())
        }
    }
}

/// Applies an action's deltas to a context, clamping each shifted variable
/// back into `[0, 1]`. Privacy preference and demographic sensitivity pass
/// through untouched.
pub fn apply_action(context: &ContextSample, action: &Action) -> ContextSample {
    let e = &action.effect;
    // Clamped values are always valid, so construction cannot fail.
    ContextSample::new(
        context.rho,
        (context.s + e.delta_s).clamp(0.0, 1.0),
        (context.r + e.delta_r).clamp(0.0, 1.0),
        (context.trust + e.delta_trust).clamp(0.0, 1.0),
        context.d_sens,
    )
    .expect("clamped context is always in range")
}

/// The result of playing one action in one universe.
#[derive(Debug, Clone, PartialEq)]
pub struct UniverseOutcome {
    pub universe_id: usize,
    /// The context after the action's effect was applied.
    pub context: ContextSample,
    /// This universe's probability mass.
    pub probability: f64,
    /// Contextual-integrity score of the post-action context.
    pub ci: f64,
    pub utility: UtilityBreakdown,
}

fn validate_distribution(universes: usize, probabilities: &[f64]) -> Result<()> {
    if probabilities.len() != universes {
        return Err(Error::LengthMismatch {
            what: "universe probabilities",
            expected: universes,
            actual: probabilities.len(),
        });
    }
    for (index, &p) in probabilities.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                field: "universe probability",
                value: p,
            });
        }
        if p < 0.0 {
            return Err(Error::NegativeWeight {
                what: "universe probability",
                index,
                value: p,
            });
        }
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution { sum: total });
    }
    Ok(())
}

/// Evaluates one action against every universe: applies the effect to each
/// universe's context and scores the result.
pub fn evaluate_universes(
    weights: &Weights,
    action: &Action,
    universes: &[ContextSample],
    probabilities: &[f64],
) -> Result<Vec<UniverseOutcome>> {
    if universes.is_empty() {
        return Err(Error::EmptyInput { what: "universes" });
    }
    validate_distribution(universes.len(), probabilities)?;
    Ok(universes
        .iter()
        .zip(probabilities)
        .enumerate()
        .map(|(universe_id, (base, &probability))| {
            let context = apply_action(base, action);
            let ci = ci_score(&context);
            let utility = utility(weights, &context, ci);
            UniverseOutcome {
                universe_id,
                context,
                probability,
                ci,
                utility,
            }
        })
        .collect())
}

fn weighted_total(outcomes: &[UniverseOutcome]) -> f64 {
    outcomes
        .iter()
        .map(|o| o.probability * o.utility.total)
        .sum()
}

/// Probability-weighted mean utility of one action over the universe set:
/// `sum_i p_i * utility(post-action context of universe i)`.
pub fn expected_utility(
    weights: &Weights,
    action: &Action,
    universes: &[ContextSample],
    probabilities: &[f64],
) -> Result<f64> {
    let outcomes = evaluate_universes(weights, action, universes, probabilities)?;
    Ok(weighted_total(&outcomes))
}

/// Expected utility of one action, with its per-universe evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionEvaluation {
    pub action: Action,
    pub outcomes: Vec<UniverseOutcome>,
    pub expected_utility: f64,
}

/// The decision: the winning action plus the full evaluation table (in
/// the action set's declaration order).
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    /// Index of the chosen action within `evaluations`.
    pub chosen_index: usize,
    pub evaluations: Vec<ActionEvaluation>,
}

impl Decision {
    pub fn chosen(&self) -> &ActionEvaluation {
        &self.evaluations[self.chosen_index]
    }
}

/// Argmax selection: evaluates every action against every universe and
/// returns the one with the highest expected utility.
///
/// Exact ties in expected utility resolve to the action with the lowest
/// id, so the outcome never depends on declaration order.
pub fn select_action(
    weights: &Weights,
    actions: &ActionSet,
    universes: &[ContextSample],
    probabilities: &[f64],
) -> Result<Decision> {
    let mut evaluations = Vec::with_capacity(actions.len());
    for action in actions.actions() {
        let outcomes = evaluate_universes(weights, action, universes, probabilities)?;
        let expected_utility = weighted_total(&outcomes);
        evaluations.push(ActionEvaluation {
            action: action.clone(),
            outcomes,
            expected_utility,
        });
    }
    let mut chosen_index = 0;
    for (index, eval) in evaluations.iter().enumerate().skip(1) {
        let best = &evaluations[chosen_index];
        let better = eval.expected_utility > best.expected_utility
            || (eval.expected_utility == best.expected_utility && eval.action.id < best.action.id);
        if better {
            chosen_index = index;
        }
    }
    Ok(Decision {
        chosen_index,
        evaluations,
    })
}

/// Discounted value of a finite horizon of per-step expected utilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueEstimate {
    /// The per-step expected utilities the value was computed from.
    pub per_step_expected_utility: Vec<f64>,
    /// `sum_k lambda^k * eu[k]`, i.e. the value looking forward from
    /// step 0 with zero value beyond the horizon.
    pub discounted_value: f64,
}

/// Backward recursion `V_t = eu_t + lambda * V_{t+1}` with `V_H = 0`,
/// where `lambda` is the weight set's discount factor.
///
/// Telescopes to `sum_k lambda^k * eu[k]`; with a constant per-step
/// utility `u` that is the geometric sum `u * (1 - lambda^H) / (1 -
/// lambda)` (or `u * H` at `lambda = 1`).
pub fn value_recursive(weights: &Weights, per_step_eu: &[f64]) -> Result<ValueEstimate> {
    let lambda = weights.lambda_discount;
    if per_step_eu.is_empty() {
        return Err(Error::EmptyInput {
            what: "per-step expected utilities",
        });
    }
    if !lambda.is_finite() {
        return Err(Error::NonFinite {
            field: "lambda_discount",
            value: lambda,
        });
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            field: "lambda_discount",
            value: lambda,
            lo: 0.0,
            hi: 1.0,
        });
    }
    for &eu in per_step_eu {
        if !eu.is_finite() {
            return Err(Error::NonFinite {
                field: "expected utility",
                value: eu,
            });
        }
    }
    let mut future = 0.0;
    for &eu in per_step_eu.iter().rev() {
        future = eu + lambda * future;
    }
    Ok(ValueEstimate {
        per_step_expected_utility: per_step_eu.to_vec(),
        discounted_value: future,
    })
}
