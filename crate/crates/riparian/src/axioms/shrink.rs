//! Counterexample minimization.
//!
//! Greedy first-accept descent: propose structurally smaller variants of
//! a violating instance — fewer agents first, then claims and budgets
//! rounded down to integers — and keep any variant that still violates.
//! Candidate order is fixed and acceptance is first-match, so shrinking
//! is deterministic; a global evaluation cap bounds the work.

use super::{check_instance, AxiomInstance, InstanceOutcome, RuleSpec};
use crate::problem::Problem;
use crate::quantity::Quantity;

const EVAL_BUDGET: usize = 256;

pub(super) fn shrink_instance<Q: Quantity>(
    rule: &RuleSpec<Q>,
    instance: AxiomInstance<Q>,
) -> AxiomInstance<Q> {
    let mut current = instance;
    let mut evals = 0usize;
    'outer: loop {
        for candidate in candidates(&current) {
            if evals >= EVAL_BUDGET {
                break 'outer;
            }
            evals += 1;
            if matches!(
                check_instance(rule, &candidate),
                InstanceOutcome::Violated(_)
            ) {
                current = candidate;
                continue 'outer;
            }
        }
        break;
    }
    current
}

use crate::quantity::total as sum;

fn floor<Q: Quantity>(q: &Q) -> Q {
    Q::from_int(q.to_f64().floor() as i64)
}

fn min_q<Q: Quantity>(a: Q, b: Q) -> Q {
    if a < b {
        a
    } else {
        b
    }
}

/// Remove one agent, clamping the budget into the shrunken problem's
/// domain. Dropping never raises the budget, so a redistribution problem
/// stays a redistribution problem.
fn drop_agent<Q: Quantity>(p: &Problem<Q>, index: usize) -> Option<Problem<Q>> {
    if p.len() <= 2 {
        return None;
    }
    let mut claims = p.claims().to_vec();
    claims.remove(index);
    let aggregate = sum(&claims);
    if aggregate == Q::zero() {
        return None;
    }
    let budget = min_q(p.budget().clone(), aggregate);
    Problem::new(claims, budget).ok()
}

/// Round every claim down to an integer (budget re-clamped).
fn floor_claims<Q: Quantity>(p: &Problem<Q>) -> Option<Problem<Q>> {
    let claims: Vec<Q> = p.claims().iter().map(floor).collect();
    if claims == p.claims() {
        return None;
    }
    let aggregate = sum(&claims);
    if aggregate == Q::zero() {
        return None;
    }
    let budget = min_q(p.budget().clone(), aggregate);
    Problem::new(claims, budget).ok()
}

/// Round the budget down to an integer.
fn floor_budget<Q: Quantity>(p: &Problem<Q>) -> Option<Problem<Q>> {
    let budget = floor(p.budget());
    if budget == *p.budget() || budget < Q::zero() {
        return None;
    }
    Problem::new(p.claims().to_vec(), budget).ok()
}

/// Agent-count reductions first, then integer simplifications.
fn problem_candidates<Q: Quantity>(p: &Problem<Q>) -> Vec<Problem<Q>> {
    let mut out: Vec<Problem<Q>> = (0..p.len()).filter_map(|i| drop_agent(p, i)).collect();
    out.extend(floor_claims(p));
    out.extend(floor_budget(p));
    out
}

fn candidates<Q: Quantity>(instance: &AxiomInstance<Q>) -> Vec<AxiomInstance<Q>> {
    match instance {
        AxiomInstance::Scale { problem, mu } => {
            let mut out: Vec<AxiomInstance<Q>> = problem_candidates(problem)
                .into_iter()
                .map(|p| AxiomInstance::Scale {
                    problem: p,
                    mu: mu.clone(),
                })
                .collect();
            let two = Q::from_int(2);
            if *mu != two {
                out.push(AxiomInstance::Scale {
                    problem: problem.clone(),
                    mu: two,
                });
            }
            out
        }
        AxiomInstance::BudgetSplit {
            problem,
            first_part,
        } => problem_candidates(problem)
            .into_iter()
            .map(|p| {
                let clamped = min_q(first_part.clone(), p.budget().clone());
                AxiomInstance::BudgetSplit {
                    problem: p,
                    first_part: clamped,
                }
            })
            .collect(),
        AxiomInstance::UpstreamRaise {
            problem,
            agent,
            delta,
        } => {
            let mut out = Vec::new();
            for k in 0..problem.len() {
                if k == *agent {
                    continue;
                }
                if let Some(p) = drop_agent(problem, k) {
                    out.push(AxiomInstance::UpstreamRaise {
                        problem: p,
                        agent: *agent - usize::from(k < *agent),
                        delta: delta.clone(),
                    });
                }
            }
            for p in floor_claims(problem).into_iter().chain(floor_budget(problem)) {
                out.push(AxiomInstance::UpstreamRaise {
                    problem: p,
                    agent: *agent,
                    delta: delta.clone(),
                });
            }
            if *delta != Q::one() {
                out.push(AxiomInstance::UpstreamRaise {
                    problem: problem.clone(),
                    agent: *agent,
                    delta: Q::one(),
                });
            }
            out
        }
        AxiomInstance::SinglePolluter {
            n,
            budget,
            position_a,
            position_b,
        } => {
            let mut out = Vec::new();
            // Keep both positions valid even under the stricter non-mouth
            // position set.
            if *n > 2 && *position_b <= n.saturating_sub(3) {
                out.push(AxiomInstance::SinglePolluter {
                    n: n - 1,
                    budget: budget.clone(),
                    position_a: *position_a,
                    position_b: *position_b,
                });
            }
            if *position_b > position_a + 1 {
                out.push(AxiomInstance::SinglePolluter {
                    n: *n,
                    budget: budget.clone(),
                    position_a: *position_a,
                    position_b: position_a + 1,
                });
            }
            if *budget != Q::one() {
                out.push(AxiomInstance::SinglePolluter {
                    n: *n,
                    budget: Q::one(),
                    position_a: *position_a,
                    position_b: *position_b,
                });
            }
            out
        }
        AxiomInstance::TopReduction { problem } => problem_candidates(problem)
            .into_iter()
            .map(|p| AxiomInstance::TopReduction { problem: p })
            .collect(),
        AxiomInstance::EqualClaimsPair {
            problem,
            agent_a,
            agent_b,
        } => {
            let mut out = Vec::new();
            for k in 0..problem.len() {
                if k == *agent_a || k == *agent_b {
                    continue;
                }
                if let Some(p) = drop_agent(problem, k) {
                    out.push(AxiomInstance::EqualClaimsPair {
                        problem: p,
                        agent_a: *agent_a - usize::from(k < *agent_a),
                        agent_b: *agent_b - usize::from(k < *agent_b),
                    });
                }
            }
            // Flooring maps the equal pair to equal floors, preserving
            // the instance invariant.
            for p in floor_claims(problem).into_iter().chain(floor_budget(problem)) {
                out.push(AxiomInstance::EqualClaimsPair {
                    problem: p,
                    agent_a: *agent_a,
                    agent_b: *agent_b,
                });
            }
            out
        }
        AxiomInstance::AdditivePair { first, second } => {
            let mut out = Vec::new();
            for k in 0..first.len() {
                if let (Some(a), Some(b)) = (drop_agent(first, k), drop_agent(second, k)) {
                    out.push(AxiomInstance::AdditivePair { first: a, second: b });
                }
            }
            for (a, b) in [
                (floor_claims(first), Some(second.clone())),
                (Some(first.clone()), floor_claims(second)),
                (floor_budget(first), Some(second.clone())),
                (Some(first.clone()), floor_budget(second)),
            ] {
                if let (Some(first), Some(second)) = (a, b) {
                    out.push(AxiomInstance::AdditivePair { first, second });
                }
            }
            out
        }
        AxiomInstance::UnitMerge { n } => (3..*n)
            .map(|m| AxiomInstance::UnitMerge { n: m })
            .collect(),
        AxiomInstance::BudgetScale { problem, alpha } => problem_candidates(problem)
            .into_iter()
            .map(|p| AxiomInstance::BudgetScale {
                problem: p,
                alpha: alpha.clone(),
            })
            .collect(),
        AxiomInstance::Perturb {
            problem,
            epsilon,
            lipschitz,
        } => problem_candidates(problem)
            .into_iter()
            .map(|p| AxiomInstance::Perturb {
                problem: p,
                epsilon: epsilon.clone(),
                lipschitz: *lipschitz,
            })
            .collect(),
    }
}
