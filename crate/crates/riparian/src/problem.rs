//! Problem and allocation types.
//!
//! A *problem* is a pair `(c, E)`: one claim per agent ordered from the
//! most upstream agent to the river mouth, plus a permit budget. Validation
//! lives in the constructor so every rule can assume a well-formed input.
//!
//! An *allocation* is a balanced award vector. The only way to build one is
//! [`Allocation::balanced`], which checks non-negativity and that awards sum
//! to the intended total — so a rule that produces an unbalanced vector
//! fails loudly at the construction site instead of corrupting downstream
//! analysis.

use crate::quantity::{total, Quantity};
use thiserror::Error;

/// Rejected problem data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    /// A claim is negative; payload is the 0-based agent index.
    #[error("claim at index {0} is negative")]
    NegativeClaim(usize),
    /// All claims are zero, so shares of the aggregate are undefined.
    #[error("aggregate claim is zero")]
    ZeroAggregateClaim,
    /// Budget exceeds the aggregate claim.
    #[error("budget exceeds aggregate claim")]
    BudgetExceedsAggregate,
    /// No agents at all.
    #[error("claims vector is empty")]
    EmptyClaims,
    /// Budget is negative.
    #[error("budget is negative")]
    NegativeBudget,
}

/// A validated claims problem `(c, E)`.
///
/// Agents are indexed `0..n` in upstream-to-downstream order; index `n-1`
/// is the river mouth. Invariants held by construction:
/// `n >= 1`, every `c[i] >= 0`, `C = sum(c) > 0`, and `0 <= E <= C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem<Q: Quantity> {
    claims: Vec<Q>,
    budget: Q,
    aggregate: Q,
}

impl<Q: Quantity> Problem<Q> {
    /// Validate and build a problem.
    pub fn new(claims: Vec<Q>, budget: Q) -> Result<Self, ProblemError> {
        if claims.is_empty() {
            return Err(ProblemError::EmptyClaims);
        }
        for (i, c) in claims.iter().enumerate() {
            if *c < Q::zero() {
                return Err(ProblemError::NegativeClaim(i));
            }
        }
        let aggregate = total(&claims);
        if aggregate == Q::zero() {
            return Err(ProblemError::ZeroAggregateClaim);
        }
        if budget < Q::zero() {
            return Err(ProblemError::NegativeBudget);
        }
        if budget > aggregate {
            return Err(ProblemError::BudgetExceedsAggregate);
        }
        Ok(Self {
            claims,
            budget,
            aggregate,
        })
    }

    /// Build from integer claims and budget; panics on invalid data.
    /// Test/fixture convenience.
    pub fn from_ints(claims: &[i64], budget: i64) -> Self {
        Self::new(
            claims.iter().map(|&c| Q::from_int(c)).collect(),
            Q::from_int(budget),
        )
        .expect("integer fixture must be a valid problem")
    }

    /// Number of agents.
    pub fn len(&self) -> usize {
        self.claims.len()
    }

    /// True when there is exactly one agent.
    pub fn is_empty(&self) -> bool {
        false // claims are non-empty by construction
    }

    /// Claims in upstream-to-downstream order.
    pub fn claims(&self) -> &[Q] {
        &self.claims
    }

    /// Claim of agent `i`.
    pub fn claim(&self, i: usize) -> &Q {
        &self.claims[i]
    }

    /// Permit budget `E`.
    pub fn budget(&self) -> &Q {
        &self.budget
    }

    /// Aggregate claim `C` (cached at construction).
    pub fn aggregate(&self) -> &Q {
        &self.aggregate
    }

    /// `E / C`, the fraction of claims that can be honoured.
    pub fn budget_ratio(&self) -> Q {
        self.budget.clone() / self.aggregate.clone()
    }

    /// True when the budget equals the aggregate claim (`E = C`).
    ///
    /// Uses backend equality: exact in rational mode, `1e-9` in float mode.
    pub fn is_redistribution(&self) -> bool {
        self.budget.approx_eq(&self.aggregate)
    }

    /// Same claims with a different budget.
    pub fn with_budget(&self, budget: Q) -> Result<Self, ProblemError> {
        Self::new(self.claims.clone(), budget)
    }

    /// Lossy copy in the float backend.
    pub fn to_f64(&self) -> Problem<f64> {
        Problem {
            claims: self.claims.iter().map(Quantity::to_f64).collect(),
            budget: self.budget.to_f64(),
            aggregate: self.aggregate.to_f64(),
        }
    }
}

/// Tolerance for the balance check in float mode, scaled by problem size
/// below to absorb accumulated rounding in long sums.
const BALANCE_TOL: f64 = 1e-9;

/// A balanced, non-negative award vector for a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation<Q: Quantity> {
    awards: Vec<Q>,
}

impl<Q: Quantity> Allocation<Q> {
    /// Check awards for balance (`sum == expected_total`) and
    /// non-negativity, then wrap them.
    ///
    /// Panics on violation: every rule in this crate is proven to produce
    /// balanced non-negative awards, so an imbalance here is a bug in the
    /// rule, not a user error.
    pub fn balanced(awards: Vec<Q>, expected_total: &Q) -> Self {
        for (i, a) in awards.iter().enumerate() {
            // Float rules may produce tiny negative dust; anything beyond
            // tolerance is a genuine sign error.
            assert!(
                *a >= Q::zero() || a.abs_diff(&Q::zero()).to_f64() <= BALANCE_TOL,
                "award {i} is negative: {a:?}"
            );
        }
        let sum = total(&awards);
        let tol = BALANCE_TOL * (awards.len().max(1) as f64);
        assert!(
            sum.approx_eq_tol(expected_total, tol),
            "awards sum to {sum:?}, expected {expected_total:?}"
        );
        Self { awards }
    }

    /// Awards in agent order.
    pub fn awards(&self) -> &[Q] {
        &self.awards
    }

    /// Award of agent `i`.
    pub fn award(&self, i: usize) -> &Q {
        &self.awards[i]
    }

    /// Number of agents.
    pub fn len(&self) -> usize {
        self.awards.len()
    }

    /// Never true; allocations cover at least one agent.
    pub fn is_empty(&self) -> bool {
        self.awards.is_empty()
    }

    /// Elementwise backend equality against another allocation.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.awards.len() == other.awards.len()
            && self
                .awards
                .iter()
                .zip(&other.awards)
                .all(|(a, b)| a.approx_eq(b))
    }

    /// Consume into the raw award vector.
    pub fn into_awards(self) -> Vec<Q> {
        self.awards
    }
}
