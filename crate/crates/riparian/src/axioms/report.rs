//! Report and counterexample serialization.
//!
//! Counterexamples embed the full instance with quantities as their
//! string representations, so an exact-backend witness survives the trip
//! through JSON unchanged and can be re-checked later.

use super::{check_instance, Axiom, AxiomInstance, InstanceOutcome, RuleSpec, Violation};
use crate::problem::Problem;
use crate::quantity::Quantity;
use serde_json::{json, Value};

/// Outcome of one axiom check. "Satisfied" is always sample-relative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SatisfiedOnSample,
    Violated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SatisfiedOnSample => "satisfied-on-sample",
            Verdict::Violated => "violated",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A minimized, replayable witness of a violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// Serialized [`AxiomInstance`]; feed to [`replay_counterexample`].
    pub instance: Value,
    pub agent: usize,
    pub lhs: String,
    pub rhs: String,
    pub diff: String,
    pub context: String,
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        json!({
            "instance": self.instance,
            "agent": self.agent,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "diff": self.diff,
            "context": self.context,
        })
    }
}

/// Result of checking one axiom against one rule.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    /// Parseable rule spec (round-trips through [`RuleSpec::parse`]).
    pub rule: String,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub seed: u64,
    /// Instances actually evaluated (skips excluded).
    pub sample_size: usize,
    pub skipped: usize,
    /// Set for probes whose pass verdict is non-conclusive.
    pub heuristic: bool,
}

impl AxiomReport {
    pub fn to_json(&self) -> Value {
        json!({
            "axiom": self.axiom.name(),
            "rule": self.rule,
            "verdict": self.verdict.as_str(),
            "counterexample": self.counterexample.as_ref().map(Counterexample::to_json),
            "seed": self.seed,
            "sample_size": self.sample_size,
            "skipped": self.skipped,
            "heuristic": self.heuristic,
        })
    }
}

pub(super) fn counterexample<Q: Quantity>(
    instance: &AxiomInstance<Q>,
    violation: &Violation<Q>,
) -> Counterexample {
    Counterexample {
        instance: instance.to_value(),
        agent: violation.agent,
        lhs: violation.lhs.repr(),
        rhs: violation.rhs.repr(),
        diff: violation.diff().repr(),
        context: violation.context.clone(),
    }
}

/// Re-evaluate a serialized counterexample against a rule.
///
/// Returns true iff the instance parses and still violates. Uses the
/// same evaluator as the checkers, so reported witnesses reproduce by
/// construction.
pub fn replay_counterexample<Q: Quantity>(rule: &RuleSpec<Q>, instance: &Value) -> bool {
    match AxiomInstance::<Q>::from_value(instance) {
        Ok(parsed) => matches!(
            check_instance(rule, &parsed),
            InstanceOutcome::Violated(_)
        ),
        Err(_) => false,
    }
}

fn quantity_value<Q: Quantity>(q: &Q) -> Value {
    Value::String(q.repr())
}

fn parse_quantity<Q: Quantity>(value: &Value) -> Result<Q, String> {
    let text = value
        .as_str()
        .ok_or_else(|| format!("expected a quantity string, got {value}"))?;
    Q::from_decimal_str(text).map_err(|e| e.to_string())
}

fn parse_index(value: &Value, field: &str) -> Result<usize, String> {
    value
        .get(field)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| format!("missing or non-integer field {field:?}"))
}

fn problem_value<Q: Quantity>(p: &Problem<Q>) -> Value {
    json!({
        "claims": p.claims().iter().map(quantity_value).collect::<Vec<_>>(),
        "budget": quantity_value(p.budget()),
    })
}

fn parse_problem<Q: Quantity>(value: &Value, field: &str) -> Result<Problem<Q>, String> {
    let node = value
        .get(field)
        .ok_or_else(|| format!("missing field {field:?}"))?;
    let claims = node
        .get("claims")
        .and_then(Value::as_array)
        .ok_or_else(|| "missing claims array".to_owned())?
        .iter()
        .map(parse_quantity)
        .collect::<Result<Vec<Q>, _>>()?;
    let budget = parse_quantity(
        node.get("budget")
            .ok_or_else(|| "missing budget".to_owned())?,
    )?;
    Problem::new(claims, budget).map_err(|e| e.to_string())
}

fn parse_scalar<Q: Quantity>(value: &Value, field: &str) -> Result<Q, String> {
    parse_quantity(
        value
            .get(field)
            .ok_or_else(|| format!("missing field {field:?}"))?,
    )
}

impl<Q: Quantity> AxiomInstance<Q> {
    /// Serialize for embedding in a report.
    pub fn to_value(&self) -> Value {
        match self {
            AxiomInstance::Scale { problem, mu } => json!({
                "type": "scale",
                "problem": problem_value(problem),
                "mu": quantity_value(mu),
            }),
            AxiomInstance::BudgetSplit {
                problem,
                first_part,
            } => json!({
                "type": "budget-split",
                "problem": problem_value(problem),
                "first_part": quantity_value(first_part),
            }),
            AxiomInstance::UpstreamRaise {
                problem,
                agent,
                delta,
            } => json!({
                "type": "upstream-raise",
                "problem": problem_value(problem),
                "agent": agent,
                "delta": quantity_value(delta),
            }),
            AxiomInstance::SinglePolluter {
                n,
                budget,
                position_a,
                position_b,
            } => json!({
                "type": "single-polluter",
                "n": n,
                "budget": quantity_value(budget),
                "position_a": position_a,
                "position_b": position_b,
            }),
            AxiomInstance::TopReduction { problem } => json!({
                "type": "top-reduction",
                "problem": problem_value(problem),
            }),
            AxiomInstance::EqualClaimsPair {
                problem,
                agent_a,
                agent_b,
            } => json!({
                "type": "equal-claims-pair",
                "problem": problem_value(problem),
                "agent_a": agent_a,
                "agent_b": agent_b,
            }),
            AxiomInstance::AdditivePair { first, second } => json!({
                "type": "additive-pair",
                "first": problem_value(first),
                "second": problem_value(second),
            }),
            AxiomInstance::UnitMerge { n } => json!({
                "type": "unit-merge",
                "n": n,
            }),
            AxiomInstance::BudgetScale { problem, alpha } => json!({
                "type": "budget-scale",
                "problem": problem_value(problem),
                "alpha": quantity_value(alpha),
            }),
            AxiomInstance::Perturb {
                problem,
                epsilon,
                lipschitz,
            } => json!({
                "type": "perturb",
                "problem": problem_value(problem),
                "epsilon": quantity_value(epsilon),
                "lipschitz": lipschitz,
            }),
        }
    }

    /// Parse a serialized instance back. Inverse of [`Self::to_value`].
    pub fn from_value(value: &Value) -> Result<Self, String> {
        let kind = value
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| "missing instance type".to_owned())?;
        Ok(match kind {
            "scale" => AxiomInstance::Scale {
                problem: parse_problem(value, "problem")?,
                mu: parse_scalar(value, "mu")?,
            },
            "budget-split" => AxiomInstance::BudgetSplit {
                problem: parse_problem(value, "problem")?,
                first_part: parse_scalar(value, "first_part")?,
            },
            "upstream-raise" => AxiomInstance::UpstreamRaise {
                problem: parse_problem(value, "problem")?,
                agent: parse_index(value, "agent")?,
                delta: parse_scalar(value, "delta")?,
            },
            "single-polluter" => AxiomInstance::SinglePolluter {
                n: parse_index(value, "n")?,
                budget: parse_scalar(value, "budget")?,
                position_a: parse_index(value, "position_a")?,
                position_b: parse_index(value, "position_b")?,
            },
            "top-reduction" => AxiomInstance::TopReduction {
                problem: parse_problem(value, "problem")?,
            },
            "equal-claims-pair" => AxiomInstance::EqualClaimsPair {
                problem: parse_problem(value, "problem")?,
                agent_a: parse_index(value, "agent_a")?,
                agent_b: parse_index(value, "agent_b")?,
            },
            "additive-pair" => AxiomInstance::AdditivePair {
                first: parse_problem(value, "first")?,
                second: parse_problem(value, "second")?,
            },
            "unit-merge" => AxiomInstance::UnitMerge {
                n: parse_index(value, "n")?,
            },
            "budget-scale" => AxiomInstance::BudgetScale {
                problem: parse_problem(value, "problem")?,
                alpha: parse_scalar(value, "alpha")?,
            },
            "perturb" => AxiomInstance::Perturb {
                problem: parse_problem(value, "problem")?,
                epsilon: parse_scalar(value, "epsilon")?,
                lipschitz: value
                    .get("lipschitz")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| "missing lipschitz budget".to_owned())?,
            },
            other => return Err(format!("unknown instance type {other:?}")),
        })
    }
}
