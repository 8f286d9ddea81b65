//! Executable axiom checkers with seeded counterexample search.
//!
//! Each axiom is checked by evaluating a stream of concrete *instances*
//! ([`AxiomInstance`]) against a rule. Instances are generated
//! deterministically from a seed — always from integer draws, so the exact
//! and float backends see identical inputs — and a handful of fixed
//! fixtures known to separate the rule families are always included.
//!
//! A violation yields a replayable counterexample: the instance is
//! serialized into the report, and re-evaluating it reproduces the
//! inequality. "Satisfied" always means *satisfied on the examined
//! sample*; no checker proves anything.

mod generate;
mod report;
mod shrink;

pub use generate::{gen_problems, GenConfig};
pub use report::{replay_counterexample, AxiomReport, Counterexample, Verdict};

use crate::problem::{Allocation, Problem, ProblemError};
use crate::quantity::Quantity;
use crate::rules::{
    averaging, full_transfer, generalized_geometric, geometric, GammaFunction, GammaParam,
    LambdaParam, RuleError,
};
use thiserror::Error;

/// A rule under test: family plus parameter.
#[derive(Debug, Clone)]
pub enum RuleSpec<Q: Quantity> {
    Proportional,
    FullTransfer,
    Geometric(GammaParam<Q>),
    Averaging(LambdaParam<Q>),
    GeneralizedGeometric(GammaFunction<Q>),
}

/// Failure to parse a rule spec string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rule spec {input:?}: {reason}")]
pub struct ParseRuleSpecError {
    pub input: String,
    pub reason: String,
}

impl<Q: Quantity> RuleSpec<Q> {
    /// Evaluate the rule on a problem.
    pub fn apply(&self, p: &Problem<Q>) -> Result<Allocation<Q>, RuleError> {
        Ok(match self {
            Self::Proportional => proportional_alias(p),
            Self::FullTransfer => full_transfer(p),
            Self::Geometric(g) => geometric(p, g),
            Self::Averaging(l) => averaging(p, l),
            Self::GeneralizedGeometric(f) => generalized_geometric(p, f)?,
        })
    }

    /// Parse `prop`, `ft`, `geometric:G`, `averaging:L`, or `gengeo:SPEC`
    /// (with `geo:`/`avg:`/`full-transfer`/`proportional` aliases).
    pub fn parse(text: &str) -> Result<Self, ParseRuleSpecError> {
        let bad = |reason: String| ParseRuleSpecError {
            input: text.to_owned(),
            reason,
        };
        match text {
            "prop" | "proportional" => return Ok(Self::Proportional),
            "ft" | "full-transfer" => return Ok(Self::FullTransfer),
            _ => {}
        }
        let (kind, rest) = text.split_once(':').ok_or_else(|| {
            bad("expected prop, ft, geometric:G, averaging:L, or gengeo:SPEC".to_owned())
        })?;
        let scalar = |what: &'static str| {
            Q::from_decimal_str(rest)
                .map_err(|e| bad(format!("bad {what}: {e}")))
        };
        match kind {
            "geometric" | "geo" => Ok(Self::Geometric(
                GammaParam::new(scalar("gamma")?).map_err(|e| bad(e.to_string()))?,
            )),
            "averaging" | "avg" => Ok(Self::Averaging(
                LambdaParam::new(scalar("lambda")?).map_err(|e| bad(e.to_string()))?,
            )),
            "gengeo" => Ok(Self::GeneralizedGeometric(
                GammaFunction::from_spec(rest).map_err(|e| bad(e.to_string()))?,
            )),
            other => Err(bad(format!("unknown rule family {other:?}"))),
        }
    }
}

// `proportional` the free function vs. the enum variant share a name in
// this module's imports; alias the function to keep `apply` readable.
use crate::rules::proportional as proportional_alias;

impl<Q: Quantity> std::fmt::Display for RuleSpec<Q> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Proportional => write!(f, "prop"),
            Self::FullTransfer => write!(f, "ft"),
            Self::Geometric(g) => write!(f, "geometric:{}", g.value()),
            Self::Averaging(l) => write!(f, "averaging:{}", l.value()),
            Self::GeneralizedGeometric(gf) => write!(f, "gengeo:{gf:?}"),
        }
    }
}

/// The checkable axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `φ(μc, μE) = μ φ(c, E)` for μ > 0.
    ScaleInvariance,
    /// `φ(c, E' + E'') = φ(c, E') + φ(c, E'')`.
    BudgetAdditivity,
    /// Raising one claim on the redistribution domain leaves every
    /// strictly-upstream award unchanged.
    UpstreamInvariance,
    /// A lone polluter's award does not depend on its position (default:
    /// non-mouth positions only).
    EqualSinglePolluters,
    /// Removing the top agent with its award and passing its residual
    /// claim downstream leaves the other awards unchanged.
    TopConsistency,
    /// Agents with equal claims receive equal awards.
    EqualClaims,
    /// `φ(c + ĉ, E + E') = φ(c, E) + φ(ĉ, E')`.
    Additivity,
    /// Adjacent agents cannot change their joint award by merging, on
    /// unit single-polluter problems.
    MergingSplitting,
    /// `φ(c, αC) = α φ(c, C)` for α in [0, 1].
    BudgetLinearity,
    /// Heuristic probe: ±ε input perturbations move awards by at most a
    /// Lipschitz budget times ε. Non-conclusive by construction.
    Continuity,
}

impl Axiom {
    /// Every checkable axiom, heuristic probe included.
    pub fn all() -> &'static [Axiom] {
        &[
            Axiom::ScaleInvariance,
            Axiom::BudgetAdditivity,
            Axiom::UpstreamInvariance,
            Axiom::EqualSinglePolluters,
            Axiom::TopConsistency,
            Axiom::EqualClaims,
            Axiom::Additivity,
            Axiom::MergingSplitting,
            Axiom::BudgetLinearity,
            Axiom::Continuity,
        ]
    }

    /// The axioms included in the satisfy/violate matrix (everything
    /// except the continuity heuristic, which yields no clean verdict).
    pub fn matrix_axioms() -> &'static [Axiom] {
        &Axiom::all()[..9]
    }

    /// Stable kebab-case name used by reports and the command line.
    pub fn name(self) -> &'static str {
        match self {
            Axiom::ScaleInvariance => "scale-invariance",
            Axiom::BudgetAdditivity => "budget-additivity",
            Axiom::UpstreamInvariance => "upstream-invariance",
            Axiom::EqualSinglePolluters => "equal-single-polluters",
            Axiom::TopConsistency => "top-consistency",
            Axiom::EqualClaims => "equal-claims",
            Axiom::Additivity => "additivity",
            Axiom::MergingSplitting => "merging-splitting",
            Axiom::BudgetLinearity => "budget-linearity",
            Axiom::Continuity => "continuity",
        }
    }

    pub fn from_name(name: &str) -> Option<Axiom> {
        Axiom::all().iter().copied().find(|a| a.name() == name)
    }

    /// True for probes whose "satisfied" verdict is non-conclusive.
    pub fn is_heuristic(self) -> bool {
        matches!(self, Axiom::Continuity)
    }
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs for the checkers. The defaults match the bundled matrix run.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub seed: u64,
    /// Randomized instances per axiom (fixtures come on top).
    pub samples: usize,
    /// Agents per generated problem, inclusive.
    pub n_range: (usize, usize),
    /// Claims are drawn as numer/denom with numer in 1..=claim_numer_max,
    /// denom in 1..=claim_denom_max.
    pub claim_numer_max: i64,
    pub claim_denom_max: i64,
    /// Probability that a drawn claim is zero (never all zero).
    pub zero_claim_probability: f64,
    /// Largest unit problem for the merging/splitting identity.
    pub merging_n_max: usize,
    /// Include the mouth in the equal-single-polluters position set.
    pub extended_polluter_positions: bool,
    /// Perturbation size of the continuity probe, as (numer, denom).
    pub epsilon: (i64, i64),
    /// Lipschitz budget of the continuity probe.
    pub lipschitz: f64,
    /// Minimize counterexamples before reporting.
    pub shrink: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            samples: 500,
            n_range: (2, 6),
            claim_numer_max: 20,
            claim_denom_max: 4,
            zero_claim_probability: 0.15,
            merging_n_max: 8,
            extended_polluter_positions: false,
            epsilon: (1, 1_000_000),
            lipschitz: 1000.0,
            shrink: true,
        }
    }
}

/// One concrete check: an axiom applied to specific data.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomInstance<Q: Quantity> {
    Scale { problem: Problem<Q>, mu: Q },
    BudgetSplit { problem: Problem<Q>, first_part: Q },
    UpstreamRaise {
        problem: Problem<Q>,
        agent: usize,
        delta: Q,
    },
    SinglePolluter {
        n: usize,
        budget: Q,
        position_a: usize,
        position_b: usize,
    },
    TopReduction { problem: Problem<Q> },
    EqualClaimsPair {
        problem: Problem<Q>,
        agent_a: usize,
        agent_b: usize,
    },
    AdditivePair {
        first: Problem<Q>,
        second: Problem<Q>,
    },
    UnitMerge { n: usize },
    BudgetScale { problem: Problem<Q>, alpha: Q },
    Perturb {
        problem: Problem<Q>,
        epsilon: Q,
        lipschitz: f64,
    },
}

/// Result of evaluating one instance.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceOutcome<Q: Quantity> {
    Holds,
    Violated(Violation<Q>),
    /// Preconditions failed (e.g. the reduced problem left the domain);
    /// counted, never treated as a violation.
    Skipped(String),
}

/// The two unequal values behind a violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<Q: Quantity> {
    /// Index into the compared vectors (agent position).
    pub agent: usize,
    pub lhs: Q,
    pub rhs: Q,
    pub context: String,
}

impl<Q: Quantity> Violation<Q> {
    pub fn diff(&self) -> Q {
        self.lhs.abs_diff(&self.rhs)
    }
}

/// Violations below this size are noise in float mode, not
/// counterexamples; exact mode reports any nonzero difference.
const FLOAT_VIOLATION_THRESHOLD: f64 = 1e-6;

/// Compare award vectors; report the largest difference that clears the
/// backend's violation threshold.
fn compare<Q: Quantity>(lhs: &[Q], rhs: &[Q], context: &str) -> InstanceOutcome<Q> {
    assert_eq!(lhs.len(), rhs.len(), "comparing unequal award vectors");
    let mut worst: Option<Violation<Q>> = None;
    for (i, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        let diff = a.abs_diff(b);
        let beyond = if Q::EXACT {
            diff != Q::zero()
        } else {
            diff.to_f64() > FLOAT_VIOLATION_THRESHOLD
        };
        if beyond && worst.as_ref().is_none_or(|w| diff > w.diff()) {
            worst = Some(Violation {
                agent: i,
                lhs: a.clone(),
                rhs: b.clone(),
                context: context.to_owned(),
            });
        }
    }
    match worst {
        Some(v) => InstanceOutcome::Violated(v),
        None => InstanceOutcome::Holds,
    }
}

fn scale_awards<Q: Quantity>(awards: &[Q], factor: &Q) -> Vec<Q> {
    awards.iter().map(|a| factor.clone() * a.clone()).collect()
}

fn sum_awards<Q: Quantity>(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

/// A single-polluter redistribution problem: claim `budget` at `position`,
/// zero elsewhere.
fn single_polluter_problem<Q: Quantity>(
    n: usize,
    position: usize,
    budget: &Q,
) -> Result<Problem<Q>, ProblemError> {
    let mut claims = vec![Q::zero(); n];
    claims[position] = budget.clone();
    Problem::new(claims, budget.clone())
}

/// Evaluate one instance against one rule.
///
/// This single evaluator backs both the sample loop and counterexample
/// replay, so a reported violation reproduces by construction.
pub fn check_instance<Q: Quantity>(
    rule: &RuleSpec<Q>,
    instance: &AxiomInstance<Q>,
) -> InstanceOutcome<Q> {
    match try_check(rule, instance) {
        Ok(outcome) => outcome,
        Err(reason) => InstanceOutcome::Skipped(reason),
    }
}

fn try_check<Q: Quantity>(
    rule: &RuleSpec<Q>,
    instance: &AxiomInstance<Q>,
) -> Result<InstanceOutcome<Q>, String> {
    let apply = |p: &Problem<Q>| rule.apply(p).map_err(|e| format!("rule failed: {e}"));
    let build = |claims: Vec<Q>, budget: Q| {
        Problem::new(claims, budget).map_err(|e| format!("constructed problem invalid: {e}"))
    };
    Ok(match instance {
        AxiomInstance::Scale { problem, mu } => {
            let scaled = build(
                problem
                    .claims()
                    .iter()
                    .map(|c| mu.clone() * c.clone())
                    .collect(),
                mu.clone() * problem.budget().clone(),
            )?;
            compare(
                apply(&scaled)?.awards(),
                &scale_awards(apply(problem)?.awards(), mu),
                &format!("awards on the mu-scaled problem vs mu-scaled awards, mu = {mu}"),
            )
        }
        AxiomInstance::BudgetSplit {
            problem,
            first_part,
        } => {
            let e1 = first_part.clone();
            let e2 = problem.budget().clone() - e1.clone();
            let p1 = problem
                .with_budget(e1)
                .map_err(|e| format!("first installment invalid: {e}"))?;
            let p2 = problem
                .with_budget(e2)
                .map_err(|e| format!("second installment invalid: {e}"))?;
            compare(
                apply(problem)?.awards(),
                &sum_awards(apply(&p1)?.awards(), apply(&p2)?.awards()),
                "whole-budget awards vs the sum over two installments",
            )
        }
        AxiomInstance::UpstreamRaise {
            problem,
            agent,
            delta,
        } => {
            // Off the redistribution domain the budget ratio shifts with
            // the raise and the identity is false for every rule; the
            // axiom simply does not apply there.
            if !problem.is_redistribution() {
                return Err("precondition failed: not a redistribution problem".to_owned());
            }
            if *agent >= problem.len() {
                return Err(format!("agent {agent} out of range"));
            }
            if *agent == 0 {
                return Ok(InstanceOutcome::Holds); // nobody upstream: vacuous
            }
            let mut claims = problem.claims().to_vec();
            claims[*agent] = claims[*agent].clone() + delta.clone();
            let raised = build(claims, problem.budget().clone() + delta.clone())?;
            compare(
                &apply(problem)?.awards()[..*agent],
                &apply(&raised)?.awards()[..*agent],
                &format!("upstream awards before vs after raising claim {agent} by {delta}"),
            )
        }
        AxiomInstance::SinglePolluter {
            n,
            budget,
            position_a,
            position_b,
        } => {
            if *position_a >= *n || *position_b >= *n {
                return Err("polluter position out of range".to_owned());
            }
            let pa = single_polluter_problem(*n, *position_a, budget)
                .map_err(|e| format!("polluter problem invalid: {e}"))?;
            let pb = single_polluter_problem(*n, *position_b, budget)
                .map_err(|e| format!("polluter problem invalid: {e}"))?;
            let award_a = apply(&pa)?.award(*position_a).clone();
            let award_b = apply(&pb)?.award(*position_b).clone();
            compare(
                &[award_a],
                &[award_b],
                &format!(
                    "lone polluter's award at position {} vs position {} (n = {n})",
                    position_a + 1,
                    position_b + 1
                ),
            )
        }
        AxiomInstance::TopReduction { problem } => {
            // Like the upstream-invariance axiom, top consistency is a
            // redistribution-domain statement: reducing a deficit problem
            // shifts the budget ratio and the identity fails everywhere.
            if !problem.is_redistribution() {
                return Err("precondition failed: not a redistribution problem".to_owned());
            }
            let x = apply(problem)?;
            let top_award = x.award(0).clone();
            let top_claim = problem.claim(0).clone();
            let within = if Q::EXACT {
                top_award <= top_claim
            } else {
                top_award.to_f64() <= top_claim.to_f64() + crate::quantity::FLOAT_EQ_TOL
            };
            if !within {
                return Err(format!(
                    "precondition failed: top award {top_award} exceeds top claim {top_claim}"
                ));
            }
            let mut claims = problem.claims()[1..].to_vec();
            claims[0] = claims[0].clone() + (top_claim - top_award.clone());
            let reduced = build(claims, problem.budget().clone() - top_award)?;
            compare(
                &x.awards()[1..],
                apply(&reduced)?.awards(),
                "remaining awards vs the rule re-run on the reduced problem",
            )
        }
        AxiomInstance::EqualClaimsPair {
            problem,
            agent_a,
            agent_b,
        } => {
            if *agent_a >= problem.len() || *agent_b >= problem.len() {
                return Err("agent index out of range".to_owned());
            }
            if problem.claim(*agent_a) != problem.claim(*agent_b) {
                return Err("instance does not carry an equal-claim pair".to_owned());
            }
            let x = apply(problem)?;
            compare(
                &[x.award(*agent_a).clone()],
                &[x.award(*agent_b).clone()],
                &format!(
                    "awards of agents {} and {} with equal claims",
                    agent_a + 1,
                    agent_b + 1
                ),
            )
        }
        AxiomInstance::AdditivePair { first, second } => {
            let combined = build(
                sum_awards(first.claims(), second.claims()),
                first.budget().clone() + second.budget().clone(),
            )?;
            compare(
                apply(&combined)?.awards(),
                &sum_awards(apply(first)?.awards(), apply(second)?.awards()),
                "awards on the combined problem vs the sum of separate awards",
            )
        }
        AxiomInstance::UnitMerge { n } => {
            if *n < 2 {
                return Err("unit problems need at least two agents".to_owned());
            }
            let unit = |m: usize| {
                let mut claims = vec![Q::zero(); m];
                claims[0] = Q::one();
                build(claims, Q::one())
            };
            let big = apply(&unit(*n)?)?;
            let small = apply(&unit(*n - 1)?)?;
            let merged: Vec<Q> = (0..*n - 1)
                .map(|i| big.award(i).clone() + big.award(i + 1).clone())
                .collect();
            compare(
                &merged,
                small.awards(),
                &format!(
                    "joint award of merged neighbours on the {n}-agent unit problem \
                     vs the {}-agent one",
                    n - 1
                ),
            )
        }
        AxiomInstance::BudgetScale { problem, alpha } => {
            let full = problem
                .with_budget(problem.aggregate().clone())
                .map_err(|e| format!("full-budget problem invalid: {e}"))?;
            let scaled = problem
                .with_budget(alpha.clone() * problem.aggregate().clone())
                .map_err(|e| format!("scaled-budget problem invalid: {e}"))?;
            compare(
                apply(&scaled)?.awards(),
                &scale_awards(apply(&full)?.awards(), alpha),
                &format!("awards at budget alpha*C vs alpha-scaled full-budget awards, alpha = {alpha}"),
            )
        }
        AxiomInstance::Perturb {
            problem,
            epsilon,
            lipschitz,
        } => check_perturbation(rule, problem, epsilon, *lipschitz)?,
    })
}

/// Continuity probe: wiggle every coordinate by ±ε and flag award jumps
/// beyond `lipschitz`·ε. Heuristic — a pass is not a proof.
fn check_perturbation<Q: Quantity>(
    rule: &RuleSpec<Q>,
    problem: &Problem<Q>,
    epsilon: &Q,
    lipschitz: f64,
) -> Result<InstanceOutcome<Q>, String> {
    let base = rule
        .apply(problem)
        .map_err(|e| format!("rule failed: {e}"))?;
    let allowed = lipschitz * epsilon.to_f64();
    let n = problem.len();
    let mut variants: Vec<(Vec<Q>, Q)> = Vec::new();
    for i in 0..n {
        for sign in [1i64, -1] {
            let mut claims = problem.claims().to_vec();
            let moved = claims[i].clone() + Q::from_int(sign) * epsilon.clone();
            if moved < Q::zero() {
                continue;
            }
            claims[i] = moved;
            let total: Q = claims
                .iter()
                .fold(Q::zero(), |acc, c| acc + c.clone());
            if total == Q::zero() {
                continue;
            }
            let budget = if *problem.budget() > total {
                total
            } else {
                problem.budget().clone()
            };
            variants.push((claims, budget));
        }
    }
    for sign in [1i64, -1] {
        let moved = problem.budget().clone() + Q::from_int(sign) * epsilon.clone();
        if moved < Q::zero() || moved > *problem.aggregate() {
            continue;
        }
        variants.push((problem.claims().to_vec(), moved));
    }
    for (claims, budget) in variants {
        let perturbed = Problem::new(claims, budget)
            .map_err(|e| format!("perturbed problem invalid: {e}"))?;
        let alloc = rule
            .apply(&perturbed)
            .map_err(|e| format!("rule failed on perturbed input: {e}"))?;
        for (i, (a, b)) in base.awards().iter().zip(alloc.awards()).enumerate() {
            let jump = a.abs_diff(b).to_f64();
            if jump > allowed {
                return Ok(InstanceOutcome::Violated(Violation {
                    agent: i,
                    lhs: a.clone(),
                    rhs: b.clone(),
                    context: format!(
                        "award jump {jump:.3e} exceeds the Lipschitz budget {allowed:.3e} \
                         under a ±{epsilon} perturbation"
                    ),
                }));
            }
        }
    }
    Ok(InstanceOutcome::Holds)
}

/// Run one axiom checker: generate instances, evaluate, shrink the first
/// violation, and assemble the report.
pub fn check_axiom<Q: Quantity>(
    rule: &RuleSpec<Q>,
    axiom: Axiom,
    config: &CheckConfig,
) -> AxiomReport {
    let instances = generate::gen_instances::<Q>(axiom, config);
    let mut examined = 0usize;
    let mut skipped = 0usize;
    let mut found: Option<(AxiomInstance<Q>, Violation<Q>)> = None;
    for instance in instances {
        match check_instance(rule, &instance) {
            InstanceOutcome::Holds => examined += 1,
            InstanceOutcome::Skipped(_) => skipped += 1,
            InstanceOutcome::Violated(v) => {
                examined += 1;
                found = Some((instance, v));
                break;
            }
        }
    }
    let counterexample = found.map(|(instance, _)| {
        let minimized = if config.shrink {
            shrink::shrink_instance(rule, instance)
        } else {
            instance
        };
        let violation = match check_instance(rule, &minimized) {
            InstanceOutcome::Violated(v) => v,
            other => unreachable!("shrinking preserved violation, got {other:?}"),
        };
        report::counterexample(&minimized, &violation)
    });
    AxiomReport {
        axiom,
        rule: rule.to_string(),
        verdict: if counterexample.is_some() {
            Verdict::Violated
        } else {
            Verdict::SatisfiedOnSample
        },
        counterexample,
        seed: config.seed,
        sample_size: examined,
        skipped,
        heuristic: axiom.is_heuristic(),
    }
}

/// The default family representatives used by the bundled matrix.
pub fn default_rules<Q: Quantity>() -> Vec<RuleSpec<Q>> {
    vec![
        RuleSpec::Proportional,
        RuleSpec::FullTransfer,
        RuleSpec::Geometric(GammaParam::ratio(1, 2)),
        RuleSpec::Averaging(LambdaParam::ratio(1, 2)),
    ]
}

/// Check every matrix axiom against every rule.
pub fn axiom_matrix<Q: Quantity>(
    rules: &[RuleSpec<Q>],
    config: &CheckConfig,
) -> Vec<(Axiom, Vec<AxiomReport>)> {
    Axiom::matrix_axioms()
        .iter()
        .map(|&axiom| {
            (
                axiom,
                rules
                    .iter()
                    .map(|rule| check_axiom(rule, axiom, config))
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::Rational;

    fn config() -> CheckConfig {
        CheckConfig {
            samples: 60,
            ..CheckConfig::default()
        }
    }

    fn geometric_half() -> RuleSpec<Rational> {
        RuleSpec::Geometric(GammaParam::ratio(1, 2))
    }

    fn averaging_half() -> RuleSpec<Rational> {
        RuleSpec::Averaging(LambdaParam::ratio(1, 2))
    }

    #[test]
    fn rule_specs_parse_and_round_trip() {
        for text in ["prop", "ft", "geometric:1/2", "averaging:0.25", "gengeo:cap:1"] {
            let rule = RuleSpec::<Rational>::parse(text).unwrap();
            let shown = rule.to_string();
            assert!(RuleSpec::<Rational>::parse(&shown).is_ok(), "{shown}");
        }
        assert!(RuleSpec::<Rational>::parse("geometric:1.5").is_err());
        assert!(RuleSpec::<Rational>::parse("talmud").is_err());
    }

    #[test]
    fn merging_splitting_separates_the_families() {
        let report = check_axiom(&geometric_half(), Axiom::MergingSplitting, &config());
        assert_eq!(report.verdict, Verdict::Violated);
        // The minimal counterexample is the three-agent unit problem.
        let cex = report.counterexample.unwrap();
        assert_eq!(cex.instance["type"], "unit-merge");
        assert_eq!(cex.instance["n"], 3);

        for rule in [RuleSpec::Proportional, RuleSpec::FullTransfer, averaging_half()] {
            let report = check_axiom(&rule, Axiom::MergingSplitting, &config());
            assert_eq!(report.verdict, Verdict::SatisfiedOnSample, "{rule}");
        }
    }

    #[test]
    fn top_consistency_separates_averaging() {
        let report = check_axiom(&averaging_half(), Axiom::TopConsistency, &config());
        assert_eq!(report.verdict, Verdict::Violated);
        for rule in [
            RuleSpec::Proportional,
            RuleSpec::FullTransfer,
            geometric_half(),
        ] {
            let report = check_axiom(&rule, Axiom::TopConsistency, &config());
            assert_eq!(report.verdict, Verdict::SatisfiedOnSample, "{rule}");
        }
    }

    #[test]
    fn top_consistency_skips_degenerate_reductions() {
        // After the sole claim holder is paid off, the reduced problem has
        // no claims left; that is a precondition failure, not a violation.
        let p = Problem::<Rational>::from_ints(&[4, 0], 4);
        let outcome = check_instance(
            &RuleSpec::Proportional,
            &AxiomInstance::TopReduction { problem: p },
        );
        assert!(matches!(outcome, InstanceOutcome::Skipped(_)));
    }

    #[test]
    fn equal_claims_holds_only_for_proportional() {
        let report = check_axiom(
            &RuleSpec::<Rational>::Proportional,
            Axiom::EqualClaims,
            &config(),
        );
        assert_eq!(report.verdict, Verdict::SatisfiedOnSample);
        for rule in [RuleSpec::FullTransfer, geometric_half(), averaging_half()] {
            let report = check_axiom(&rule, Axiom::EqualClaims, &config());
            assert_eq!(report.verdict, Verdict::Violated, "{rule}");
        }
    }

    #[test]
    fn additivity_holds_only_for_full_transfer() {
        let report = check_axiom(
            &RuleSpec::<Rational>::FullTransfer,
            Axiom::Additivity,
            &config(),
        );
        assert_eq!(report.verdict, Verdict::SatisfiedOnSample);
        for rule in [RuleSpec::Proportional, geometric_half(), averaging_half()] {
            let report = check_axiom(&rule, Axiom::Additivity, &config());
            assert_eq!(report.verdict, Verdict::Violated, "{rule}");
        }
    }

    #[test]
    fn shared_axioms_hold_for_all_default_rules() {
        for rule in default_rules::<Rational>() {
            for axiom in [
                Axiom::ScaleInvariance,
                Axiom::BudgetAdditivity,
                Axiom::UpstreamInvariance,
                Axiom::EqualSinglePolluters,
                Axiom::BudgetLinearity,
            ] {
                let report = check_axiom(&rule, axiom, &config());
                assert_eq!(
                    report.verdict,
                    Verdict::SatisfiedOnSample,
                    "{rule} vs {axiom}"
                );
            }
        }
    }

    #[test]
    fn extended_polluter_positions_expose_the_mouth() {
        let extended = CheckConfig {
            extended_polluter_positions: true,
            ..config()
        };
        let report = check_axiom(&geometric_half(), Axiom::EqualSinglePolluters, &extended);
        assert_eq!(report.verdict, Verdict::Violated);
        let report = check_axiom(
            &RuleSpec::<Rational>::Proportional,
            Axiom::EqualSinglePolluters,
            &extended,
        );
        assert_eq!(report.verdict, Verdict::SatisfiedOnSample);
    }

    #[test]
    fn continuity_probe_flags_a_step_transfer_function() {
        let smooth: RuleSpec<f64> = RuleSpec::Geometric(GammaParam::new(0.5).unwrap());
        let report = check_axiom(&smooth, Axiom::Continuity, &config());
        assert_eq!(report.verdict, Verdict::SatisfiedOnSample);
        assert!(report.heuristic);

        let step = RuleSpec::GeneralizedGeometric(GammaFunction::opaque(|t: &f64| {
            if *t < 1.0 {
                0.0
            } else {
                t / 2.0
            }
        }));
        let report = check_axiom(&step, Axiom::Continuity, &config());
        assert_eq!(report.verdict, Verdict::Violated);
    }

    #[test]
    fn reports_are_deterministic_for_a_fixed_seed() {
        let a = check_axiom(&geometric_half(), Axiom::ScaleInvariance, &config());
        let b = check_axiom(&geometric_half(), Axiom::ScaleInvariance, &config());
        assert_eq!(a.to_json(), b.to_json());
        let other = CheckConfig {
            seed: 8,
            ..config()
        };
        let c = check_axiom(&geometric_half(), Axiom::ScaleInvariance, &other);
        assert_eq!(c.seed, 8);
    }

    #[test]
    fn counterexamples_replay_from_their_serialized_form() {
        let report = check_axiom(&averaging_half(), Axiom::TopConsistency, &config());
        let cex = report.counterexample.expect("violated");
        assert!(replay_counterexample(&averaging_half(), &cex.instance));
        // The same instance does not incriminate a rule that satisfies
        // the axiom.
        assert!(!replay_counterexample(
            &RuleSpec::<Rational>::Proportional,
            &cex.instance
        ));
    }
}
