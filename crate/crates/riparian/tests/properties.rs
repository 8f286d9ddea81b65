//! Randomized invariants over the allocation rules.
//!
//! Everything here runs in exact rational arithmetic unless a property is
//! explicitly about the float backend. Claims and parameters are drawn as
//! small integer ratios so proptest can shrink failures to readable
//! fractions.

use proptest::prelude::*;
use riparian::basin::{basin_geometric, BasinGraph};
use riparian::problem::{Allocation, Problem};
use riparian::quantity::{total, Quantity, Rational};
use riparian::rules::{
    augmented_claims, averaging, full_transfer, generalized_geometric, geometric,
    geometric_recurrence, proportional, GammaFunction, GammaParam, LambdaParam,
};

type Draw = (i64, i64);

/// Claim vectors as numer/denom pairs with at least one positive entry.
fn claims_strategy(max_n: usize) -> impl Strategy<Value = Vec<Draw>> {
    proptest::collection::vec((0i64..=20, 1i64..=4), 1..=max_n)
        .prop_filter("at least one positive claim", |claims| {
            claims.iter().any(|&(numer, _)| numer > 0)
        })
}

/// Budget position within `[0, C]`, in sixteenths.
fn budget_sixteenths() -> impl Strategy<Value = i64> {
    0i64..=16
}

/// Retention fractions on the eighth grid, endpoints included.
fn gamma_eighths() -> impl Strategy<Value = i64> {
    0i64..=8
}

fn rational_problem(claims: &[Draw], sixteenths: i64) -> Problem<Rational> {
    let claims: Vec<Rational> = claims
        .iter()
        .map(|&(numer, denom)| Rational::ratio(numer, denom))
        .collect();
    let budget = Rational::ratio(sixteenths, 16) * total(&claims);
    Problem::new(claims, budget).expect("valid by construction")
}

fn float_problem(claims: &[Draw], sixteenths: i64) -> Problem<f64> {
    let claims: Vec<f64> = claims
        .iter()
        .map(|&(numer, denom)| f64::ratio(numer, denom))
        .collect();
    let budget = f64::ratio(sixteenths, 16) * total(&claims);
    Problem::new(claims, budget).expect("valid by construction")
}

fn assert_balanced(alloc: &Allocation<Rational>, problem: &Problem<Rational>) {
    assert_eq!(
        total(alloc.awards()),
        *problem.budget(),
        "awards must sum to the budget exactly"
    );
    assert!(
        alloc.awards().iter().all(|a| *a >= Rational::from_int(0)),
        "awards must be non-negative"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// The closed form and the sequential pass-down oracle compute the
    /// geometric rule through unrelated arithmetic; they must agree
    /// exactly.
    #[test]
    fn closed_form_agrees_with_the_sequential_oracle(
        claims in claims_strategy(12),
        sixteenths in budget_sixteenths(),
        eighths in gamma_eighths(),
    ) {
        let p = rational_problem(&claims, sixteenths);
        let gamma = GammaParam::ratio(eighths, 8);
        let closed = geometric(&p, &gamma);
        let sequential = geometric_recurrence(&p, &gamma);
        prop_assert_eq!(closed.awards(), sequential.awards());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// A linear transfer function collapses the generalized rule onto the
    /// plain geometric rule.
    #[test]
    fn linear_transfer_function_is_the_geometric_rule(
        claims in claims_strategy(8),
        sixteenths in budget_sixteenths(),
        eighths in gamma_eighths(),
    ) {
        let p = rational_problem(&claims, sixteenths);
        let gamma = Rational::ratio(eighths, 8);
        let function = GammaFunction::linear(gamma.clone()).expect("slope in [0, 1]");
        let generalized = generalized_geometric(&p, &function).expect("validated function");
        let plain = geometric(&p, &GammaParam::new(gamma).expect("in range"));
        prop_assert_eq!(generalized.awards(), plain.awards());
    }

    /// A pure chain basin is the line process in disguise.
    #[test]
    fn chain_basin_matches_the_line_process(
        claims in claims_strategy(8),
        sixteenths in budget_sixteenths(),
        eighths in gamma_eighths(),
    ) {
        let p = rational_problem(&claims, sixteenths);
        let gamma = GammaParam::ratio(eighths, 8);
        let graph = BasinGraph::chain(p.claims(), p.budget().clone())
            .expect("chain of valid claims");
        let basin = basin_geometric(&graph, &gamma);
        let line = geometric(&p, &gamma);
        for (i, (_, award)) in basin.awards().iter().enumerate() {
            prop_assert_eq!(award, line.award(i));
        }
    }

    /// Every rule family is linear in the budget.
    #[test]
    fn all_five_rules_are_budget_linear(
        claims in claims_strategy(8),
        alpha_sixteenths in budget_sixteenths(),
        eighths in gamma_eighths(),
    ) {
        let full = rational_problem(&claims, 16);
        let alpha = Rational::ratio(alpha_sixteenths, 16);
        let scaled = full
            .with_budget(alpha.clone() * full.aggregate().clone())
            .expect("alpha in [0, 1]");
        let gamma = GammaParam::ratio(eighths, 8);
        let lambda = LambdaParam::ratio(eighths, 8);
        let cap = GammaFunction::cap(Rational::ratio(3, 2)).expect("non-negative cap");
        let rules: Vec<(&str, Box<dyn Fn(&Problem<Rational>) -> Allocation<Rational>>)> = vec![
            ("proportional", Box::new(proportional)),
            ("full transfer", Box::new(full_transfer)),
            ("geometric", Box::new(move |p| geometric(p, &gamma))),
            ("averaging", Box::new(move |p| averaging(p, &lambda))),
            (
                "generalized geometric",
                Box::new(move |p| {
                    generalized_geometric(p, &cap).expect("validated function")
                }),
            ),
        ];
        for (name, rule) in &rules {
            let scaled_awards = rule(&scaled);
            let full_awards = rule(&full);
            assert_balanced(&scaled_awards, &scaled);
            assert_balanced(&full_awards, &full);
            for (a, b) in scaled_awards.awards().iter().zip(full_awards.awards()) {
                prop_assert_eq!(
                    a.clone(),
                    alpha.clone() * b.clone(),
                    "{} must be linear in the budget",
                    name
                );
            }
        }
    }

    /// The float backend tracks exact arithmetic to within 1e-9 on the
    /// generated range.
    #[test]
    fn float_backend_tracks_exact_arithmetic(
        claims in claims_strategy(8),
        sixteenths in budget_sixteenths(),
        eighths in gamma_eighths(),
    ) {
        let exact = rational_problem(&claims, sixteenths);
        let float = float_problem(&claims, sixteenths);
        let exact_geo = geometric(&exact, &GammaParam::<Rational>::ratio(eighths, 8));
        let float_geo = geometric(&float, &GammaParam::<f64>::ratio(eighths, 8));
        for (a, b) in exact_geo.awards().iter().zip(float_geo.awards()) {
            prop_assert!((a.to_f64() - b).abs() <= 1e-9);
        }
        let exact_avg = averaging(&exact, &LambdaParam::<Rational>::ratio(eighths, 8));
        let float_avg = averaging(&float, &LambdaParam::<f64>::ratio(eighths, 8));
        for (a, b) in exact_avg.awards().iter().zip(float_avg.awards()) {
            prop_assert!((a.to_f64() - b).abs() <= 1e-9);
        }
    }

    /// Prepending a zero claim shifts augmented claims down the chain
    /// without changing them.
    #[test]
    fn augmented_claims_shift_under_a_zero_claim_prefix(
        claims in claims_strategy(8),
        eighths in gamma_eighths(),
    ) {
        let gamma = GammaParam::ratio(eighths, 8);
        let plain: Vec<Rational> = claims
            .iter()
            .map(|&(numer, denom)| Rational::ratio(numer, denom))
            .collect();
        let mut prefixed = vec![Rational::from_int(0)];
        prefixed.extend(plain.iter().cloned());
        let base = augmented_claims(&plain, &gamma);
        let shifted = augmented_claims(&prefixed, &gamma);
        for (i, value) in base.iter().enumerate() {
            prop_assert_eq!(&shifted[i + 1], value);
        }
    }
}

/// Threshold soundness on the bundled problems: the reported γ* brackets
/// the feasibility boundary to within the search tolerance.
#[test]
fn thresholds_bracket_the_feasibility_boundary() {
    use riparian::analysis::{claims_bounded, min_gamma_claims_bounded, DEFAULT_THRESHOLD_TOL};
    use riparian::datasets;

    let mut problems: Vec<Problem<f64>> = vec![
        datasets::base_problem(),
        datasets::equalized_problem(),
        datasets::swapped_problem(),
    ];
    for &(claims, budget) in &datasets::SMALL_CHAINS {
        problems.push(Problem::from_ints(claims, budget));
    }
    for p in &problems {
        let result = min_gamma_claims_bounded(p, DEFAULT_THRESHOLD_TOL);
        let feasible = |g: f64| {
            let gamma = GammaParam::new(g.clamp(0.0, 1.0)).expect("clamped");
            claims_bounded(p, &geometric(p, &gamma)).bounded
        };
        assert!(
            feasible(result.threshold + result.tol),
            "gamma* + tol must be claims-bounded (threshold {})",
            result.threshold
        );
        if result.threshold > 0.0 {
            assert!(
                !feasible(result.threshold - result.tol),
                "gamma* - tol must break claims-boundedness (threshold {})",
                result.threshold
            );
        }
    }
}
