//! Property-based tests for the model, decision, simulation, and stats
//! layers: algebraic identities and invariants that must hold on every
//! valid input, not just on hand-picked examples.

use mpt_core::decision::{
    expected_utility, select_action, universe_probabilities, value_recursive, Action, ActionEffect,
    ActionSet, ProbabilityMode,
};
use mpt_core::model::{ci_score, utility, ContextSample, Weights};
use mpt_core::rng::RngStream;
use mpt_core::simulation::{
    classify_risk_band, run_simulation, sample_context, RiskBand, SamplingSpec, SimulationConfig,
};
use mpt_core::stats::{fisher_ci_95, p_value_two_sided, pearson_r, quantile};
use proptest::prelude::*;

fn context_strategy() -> impl Strategy<Value = ContextSample> {
    (
        0.0..=1.0f64,
        0.0..=1.0f64,
        0.0..=1.0f64,
        0.0..=1.0f64,
        0.0..=1.0f64,
    )
        .prop_map(|(rho, s, r, trust, d)| ContextSample::new(rho, s, r, trust, d).unwrap())
}

/// Context with every field in [0, 1/2], so fieldwise sums of two stay
/// valid.
fn half_context_strategy() -> impl Strategy<Value = ContextSample> {
    (
        0.0..=0.5f64,
        0.0..=0.5f64,
        0.0..=0.5f64,
        0.0..=0.5f64,
        0.0..=0.5f64,
    )
        .prop_map(|(rho, s, r, trust, d)| ContextSample::new(rho, s, r, trust, d).unwrap())
}

fn weights_strategy() -> impl Strategy<Value = Weights> {
    (
        -10.0..=10.0f64,
        -10.0..=10.0f64,
        -10.0..=10.0f64,
        -10.0..=10.0f64,
        -10.0..=10.0f64,
        -10.0..=10.0f64,
        0.0..=1.0f64,
    )
        .prop_map(|(alpha, beta, gamma, delta, zeta, theta, lambda)| {
            Weights::new(alpha, beta, gamma, delta, zeta, theta, lambda).unwrap()
        })
}

fn range_strategy() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| (a.min(b), a.max(b)))
}

fn sampling_strategy() -> impl Strategy<Value = SamplingSpec> {
    (
        range_strategy(),
        range_strategy(),
        range_strategy(),
        range_strategy(),
        range_strategy(),
    )
        .prop_map(|(rho, s, r, trust, d)| SamplingSpec::new(rho, s, r, trust, d).unwrap())
}

fn effect_strategy() -> impl Strategy<Value = ActionEffect> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64).prop_map(|(delta_r, delta_s, delta_trust)| {
        ActionEffect {
            delta_r,
            delta_s,
            delta_trust,
        }
    })
}

/// 1 to 5 actions with distinct ids drawn from a wide range.
fn action_set_strategy() -> impl Strategy<Value = ActionSet> {
    (
        proptest::collection::btree_set(0u32..1000, 1..=5),
        proptest::collection::vec(effect_strategy(), 5),
    )
        .prop_map(|(ids, effects)| {
            let actions = ids
                .into_iter()
                .zip(effects)
                .enumerate()
                .map(|(k, (id, effect))| Action::new(id, format!("action {k}"), effect))
                .collect();
            ActionSet::new(actions).unwrap()
        })
}

proptest! {
    // --- model ---------------------------------------------------------

    #[test]
    fn utility_is_linear_in_context_and_ci(
        w in weights_strategy(),
        c1 in half_context_strategy(),
        c2 in half_context_strategy(),
        ci1 in 0.0..=2.0f64,
        ci2 in 0.0..=2.0f64,
    ) {
        let summed = ContextSample::new(
            c1.rho + c2.rho,
            c1.s + c2.s,
            c1.r + c2.r,
            c1.trust + c2.trust,
            c1.d_sens + c2.d_sens,
        ).unwrap();
        let whole = utility(&w, &summed, ci1 + ci2).total;
        let parts = utility(&w, &c1, ci1).total + utility(&w, &c2, ci2).total;
        prop_assert!((whole - parts).abs() < 1e-12);
    }

    #[test]
    fn utility_risk_slope_is_minus_gamma(
        w in weights_strategy(),
        c in context_strategy(),
        eps in 0.0..=1.0f64,
    ) {
        let eps = eps * (1.0 - c.r); // keep r + eps inside [0, 1]
        let bumped = ContextSample::new(c.rho, c.s, c.r + eps, c.trust, c.d_sens).unwrap();
        let change = utility(&w, &bumped, 0.0).total - utility(&w, &c, 0.0).total;
        prop_assert!((change - (-w.gamma * eps)).abs() < 1e-12);
    }

    #[test]
    fn utility_total_is_exact_term_sum(
        w in weights_strategy(),
        c in context_strategy(),
        ci in 0.0..=4.0f64,
    ) {
        let u = utility(&w, &c, ci);
        let resum = u.term_privacy + u.term_security + u.term_risk
            + u.term_trust + u.term_demographic + u.term_ci;
        prop_assert_eq!(u.total, resum);
    }

    #[test]
    fn utility_scales_with_weights(
        w in weights_strategy(),
        c in context_strategy(),
        k in 0.01..=100.0f64,
    ) {
        let base = utility(&w, &c, 0.0).total;
        let scaled = utility(&w.scaled(k), &c, 0.0).total;
        prop_assert!((scaled - k * base).abs() < 1e-9 * (1.0 + base.abs() * k));
    }

    #[test]
    fn ci_score_stays_in_range(c in context_strategy()) {
        let v = ci_score(&c);
        prop_assert!((0.0..=4.0).contains(&v));
    }

    #[test]
    fn ci_score_monotone_in_each_field(
        c in context_strategy(),
        bump in 0.001..=1.0f64,
    ) {
        let base = ci_score(&c);
        // Strictly increasing in each numerator variable...
        let eps = bump * (1.0 - c.rho);
        if eps > 0.0 {
            let up = ContextSample::new(c.rho + eps, c.s, c.r, c.trust, c.d_sens).unwrap();
            prop_assert!(ci_score(&up) > base);
        }
        let eps = bump * (1.0 - c.trust);
        if eps > 0.0 {
            let up = ContextSample::new(c.rho, c.s, c.r, c.trust + eps, c.d_sens).unwrap();
            prop_assert!(ci_score(&up) > base);
        }
        // ...and strictly decreasing in risk whenever the numerator is
        // nonzero.
        let eps = bump * (1.0 - c.r);
        if eps > 0.0 && c.rho + c.s + c.trust + c.d_sens > 0.0 {
            let up = ContextSample::new(c.rho, c.s, c.r + eps, c.trust, c.d_sens).unwrap();
            prop_assert!(ci_score(&up) < base);
        }
    }

    // --- decision ------------------------------------------------------

    #[test]
    fn probabilities_form_a_distribution(
        n in 1usize..=64,
        weights in proptest::collection::vec(0.0..=10.0f64, 1..=64),
    ) {
        let uniform = universe_probabilities(n, &ProbabilityMode::Uniform).unwrap();
        prop_assert!((uniform.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(uniform.iter().all(|&p| p > 0.0));

        if weights.iter().sum::<f64>() > 0.0 {
            let count = weights.len();
            let normalized =
                universe_probabilities(count, &ProbabilityMode::Weighted(weights)).unwrap();
            prop_assert!((normalized.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(normalized.iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn point_mass_expected_utility_equals_single_universe(
        w in weights_strategy(),
        universes in proptest::collection::vec(context_strategy(), 2..=6),
        effect in effect_strategy(),
        j in 0usize..6,
    ) {
        let j = j % universes.len();
        let action = Action::new(0, "probe", effect);
        let mut probs = vec![0.0; universes.len()];
        probs[j] = 1.0;
        let pooled = expected_utility(&w, &action, &universes, &probs).unwrap();
        let alone = expected_utility(&w, &action, &universes[j..=j], &[1.0]).unwrap();
        prop_assert_eq!(pooled, alone);
    }

    #[test]
    fn argmax_invariant_under_positive_weight_scaling(
        w in weights_strategy(),
        actions in action_set_strategy(),
        universes in proptest::collection::vec(context_strategy(), 1..=6),
        k in 0.01..=100.0f64,
    ) {
        let probs = universe_probabilities(universes.len(), &ProbabilityMode::Uniform).unwrap();
        let base = select_action(&w, &actions, &universes, &probs).unwrap();
        let scaled = select_action(&w.scaled(k), &actions, &universes, &probs).unwrap();
        prop_assert_eq!(base.chosen().action.id, scaled.chosen().action.id);
    }

    #[test]
    fn tie_break_is_order_independent(
        w in weights_strategy(),
        actions in action_set_strategy(),
        universes in proptest::collection::vec(context_strategy(), 1..=6),
    ) {
        let probs = universe_probabilities(universes.len(), &ProbabilityMode::Uniform).unwrap();
        let forward = select_action(&w, &actions, &universes, &probs).unwrap();
        let mut reversed_actions: Vec<Action> = actions.actions().to_vec();
        reversed_actions.reverse();
        let reversed_set = ActionSet::new(reversed_actions).unwrap();
        let reversed = select_action(&w, &reversed_set, &universes, &probs).unwrap();
        prop_assert_eq!(forward.chosen().action.id, reversed.chosen().action.id);
    }

    #[test]
    fn discounted_value_monotone_in_lambda_for_nonnegative_utilities(
        eu in proptest::collection::vec(0.0..=10.0f64, 1..=20),
        l1 in 0.0..=1.0f64,
        l2 in 0.0..=1.0f64,
    ) {
        let (lo, hi) = (l1.min(l2), l1.max(l2));
        let mut w_lo = Weights::replication_defaults();
        w_lo.lambda_discount = lo;
        let mut w_hi = Weights::replication_defaults();
        w_hi.lambda_discount = hi;
        let v_lo = value_recursive(&w_lo, &eu).unwrap().discounted_value;
        let v_hi = value_recursive(&w_hi, &eu).unwrap().discounted_value;
        prop_assert!(v_hi >= v_lo - 1e-12);
    }

    // --- simulation ----------------------------------------------------

    #[test]
    fn sampled_contexts_respect_arbitrary_specs(
        spec in sampling_strategy(),
        seed in any::<u64>(),
    ) {
        let mut stream = RngStream::from_state(seed);
        for _ in 0..64 {
            let c = sample_context(&mut stream, &spec);
            prop_assert!(spec.rho_range.0 <= c.rho && c.rho <= spec.rho_range.1);
            prop_assert!(spec.s_range.0 <= c.s && c.s <= spec.s_range.1);
            prop_assert!(spec.r_range.0 <= c.r && c.r <= spec.r_range.1);
            prop_assert!(spec.trust_range.0 <= c.trust && c.trust <= spec.trust_range.1);
            prop_assert!(spec.d_range.0 <= c.d_sens && c.d_sens <= spec.d_range.1);
        }
    }

    #[test]
    fn record_count_is_always_the_product(
        n_universes in 1usize..=6,
        horizon in 1usize..=8,
        n_replications in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let mut cfg = SimulationConfig::replication_defaults(seed);
        cfg.n_universes = n_universes;
        cfg.horizon = horizon;
        cfg.n_replications = n_replications;
        let records = run_simulation(&cfg).unwrap();
        prop_assert_eq!(records.len(), n_universes * horizon * n_replications);
    }

    #[test]
    fn risk_bands_partition_the_unit_interval(r in 0.0..=1.0f64) {
        let band = classify_risk_band(r).unwrap();
        let expected = if r < 1.0 / 3.0 {
            RiskBand::Low
        } else if r < 2.0 / 3.0 {
            RiskBand::Moderate
        } else {
            RiskBand::High
        };
        prop_assert_eq!(band, expected);
    }

    #[test]
    fn simulation_is_deterministic(seed in any::<u64>()) {
        let cfg = SimulationConfig::replication_defaults(seed);
        prop_assert_eq!(run_simulation(&cfg).unwrap(), run_simulation(&cfg).unwrap());
    }

    // --- stats ---------------------------------------------------------

    #[test]
    fn pearson_is_symmetric_and_affine_invariant(
        pairs in proptest::collection::vec((0.0..=1.0f64, 0.0..=1.0f64), 4..=40),
        scale in 0.1..=50.0f64,
        shift in -5.0..=5.0f64,
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        prop_assume!(x.iter().any(|&v| v != x[0]));
        prop_assume!(y.iter().any(|&v| v != y[0]));

        let rxy = pearson_r(&x, &y).unwrap();
        let ryx = pearson_r(&y, &x).unwrap();
        prop_assert_eq!(rxy, ryx);

        let transformed: Vec<f64> = x.iter().map(|&v| scale * v + shift).collect();
        let r_affine = pearson_r(&transformed, &y).unwrap();
        prop_assert!((r_affine - rxy).abs() < 1e-9);

        let negated: Vec<f64> = x.iter().map(|&v| -v).collect();
        let r_neg = pearson_r(&negated, &y).unwrap();
        prop_assert!((r_neg + rxy).abs() < 1e-9);
    }

    #[test]
    fn p_value_monotone_in_correlation_magnitude(
        r1 in -0.999..=0.999f64,
        r2 in -0.999..=0.999f64,
        n in 4usize..=500,
    ) {
        let (small, large) = if r1.abs() <= r2.abs() { (r1, r2) } else { (r2, r1) };
        let p_small = p_value_two_sided(small, n).unwrap();
        let p_large = p_value_two_sided(large, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&p_small));
        prop_assert!((0.0..=1.0).contains(&p_large));
        prop_assert!(p_large <= p_small + 1e-15);
    }

    #[test]
    fn fisher_interval_brackets_r_and_narrows_in_n(
        r in -0.999..=0.999f64,
        n in 4usize..=500,
    ) {
        let (lo, hi) = fisher_ci_95(r, n).unwrap();
        prop_assert!(lo <= r && r <= hi);
        let (lo_wide, hi_wide) = fisher_ci_95(r, n + 50).unwrap();
        prop_assert!(hi_wide - lo_wide < hi - lo);
    }

    #[test]
    fn quantiles_are_bounded_and_monotone(
        values in proptest::collection::vec(-100.0..=100.0f64, 1..=50),
        q1 in 0.0..=1.0f64,
        q2 in 0.0..=1.0f64,
    ) {
        let (lo_q, hi_q) = (q1.min(q2), q1.max(q2));
        let v_lo = quantile(&values, lo_q).unwrap();
        let v_hi = quantile(&values, hi_q).unwrap();
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(min <= v_lo && v_hi <= max);
        prop_assert!(v_lo <= v_hi);
    }
}
