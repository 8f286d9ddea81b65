//! Geometric allocation on branching river basins.
//!
//! A basin is a DAG of named nodes (claim holders) with edges pointing
//! downstream. Sinks are river mouths. The geometric process generalizes
//! from chains: walk the nodes in topological order, sum each node's own
//! claim with everything flowing in, retain the fraction `γ` of that mass
//! (mouths retain all of it — their `γ`, if any, is ignored), and split
//! the residual equally among the downstream successors.
//!
//! On a single chain `1 → 2 → … → n` this reproduces
//! [`crate::rules::geometric_retained`] exactly; the property suite pins
//! that equivalence.

use indexmap::IndexMap;

use crate::problem::Allocation;
use crate::quantity::{total, Quantity};
use crate::rules::GammaParam;
use thiserror::Error;

/// Rejected basin data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasinError {
    /// The downstream relation has a cycle. The payload lists every node
    /// left unordered when propagation stalls: the cycle members plus
    /// anything downstream of them.
    #[error("basin has a cycle through nodes {0:?}")]
    CycleDetected(Vec<String>),
    /// Every node has a successor, so the water has nowhere to end up.
    #[error("basin has no mouth (every node has a downstream successor)")]
    NoMouth,
    /// An edge endpoint names a node that does not exist.
    #[error("edge references unknown node {0:?}")]
    UnknownNode(String),
    /// Two nodes share an id.
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    /// The same edge appears twice.
    #[error("duplicate edge {0:?} -> {1:?}")]
    DuplicateEdge(String, String),
    /// A node flows into itself.
    #[error("node {0:?} has an edge to itself")]
    SelfLoop(String),
    /// A node's claim is negative.
    #[error("claim of node {0:?} is negative")]
    NegativeClaim(String),
    /// All claims are zero.
    #[error("aggregate claim is zero")]
    ZeroAggregateClaim,
    /// Budget is negative.
    #[error("budget is negative")]
    NegativeBudget,
    /// Budget exceeds the aggregate claim.
    #[error("budget exceeds aggregate claim")]
    BudgetExceedsAggregate,
    /// No nodes at all.
    #[error("basin has no nodes")]
    EmptyGraph,
    /// A per-node retention fraction falls outside `[0, 1]`.
    #[error("retention fraction of node {0:?} is outside [0, 1]")]
    NodeGammaOutOfRange(String),
}

/// One claim holder in a basin.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinNode<Q: Quantity> {
    pub id: String,
    pub claim: Q,
    /// Per-node retention override; `None` means use the γ passed to
    /// [`basin_geometric`].
    pub gamma: Option<Q>,
}

impl<Q: Quantity> BasinNode<Q> {
    pub fn new(id: impl Into<String>, claim: Q) -> Self {
        Self {
            id: id.into(),
            claim,
            gamma: None,
        }
    }

    pub fn with_gamma(mut self, gamma: Q) -> Self {
        self.gamma = Some(gamma);
        self
    }
}

/// A validated basin: nodes, downstream edges, and a permit budget.
///
/// Invariants held by construction: node ids are unique, edges reference
/// known nodes with no self-loops or duplicates, the downstream relation
/// is acyclic with at least one sink, claims are non-negative with a
/// positive aggregate, per-node γ values lie in `[0, 1]`, and
/// `0 <= budget <= aggregate`.
#[derive(Debug, Clone)]
pub struct BasinGraph<Q: Quantity> {
    nodes: Vec<BasinNode<Q>>,
    /// Successor lists, indexed like `nodes`.
    succ: Vec<Vec<usize>>,
    /// Node indices in topological (upstream-first) order.
    topo: Vec<usize>,
    budget: Q,
    aggregate: Q,
}

impl<Q: Quantity> BasinGraph<Q> {
    /// Validate nodes, edges (as id pairs), and budget into a basin.
    pub fn new(
        nodes: Vec<BasinNode<Q>>,
        edges: &[(String, String)],
        budget: Q,
    ) -> Result<Self, BasinError> {
        if nodes.is_empty() {
            return Err(BasinError::EmptyGraph);
        }
        let mut index: IndexMap<&str, usize> = IndexMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id.as_str(), i).is_some() {
                return Err(BasinError::DuplicateNode(node.id.clone()));
            }
        }
        let mut succ = vec![Vec::new(); nodes.len()];
        let mut indegree = vec![0usize; nodes.len()];
        for (from, to) in edges {
            let &f = index
                .get(from.as_str())
                .ok_or_else(|| BasinError::UnknownNode(from.clone()))?;
            let &t = index
                .get(to.as_str())
                .ok_or_else(|| BasinError::UnknownNode(to.clone()))?;
            if f == t {
                return Err(BasinError::SelfLoop(from.clone()));
            }
            if succ[f].contains(&t) {
                return Err(BasinError::DuplicateEdge(from.clone(), to.clone()));
            }
            succ[f].push(t);
            indegree[t] += 1;
        }
        if succ.iter().all(|s| !s.is_empty()) {
            return Err(BasinError::NoMouth);
        }

        // Kahn's algorithm; the ready queue is kept in node input order so
        // the topological order is deterministic.
        let mut topo = Vec::with_capacity(nodes.len());
        let mut remaining = indegree.clone();
        let mut ready: Vec<usize> = (0..nodes.len()).filter(|&i| remaining[i] == 0).collect();
        while let Some(i) = ready.first().copied() {
            ready.remove(0);
            topo.push(i);
            for &s in &succ[i] {
                remaining[s] -= 1;
                if remaining[s] == 0 {
                    ready.push(s);
                    ready.sort_unstable();
                }
            }
        }
        if topo.len() != nodes.len() {
            let stuck = (0..nodes.len())
                .filter(|&i| remaining[i] > 0)
                .map(|i| nodes[i].id.clone())
                .collect();
            return Err(BasinError::CycleDetected(stuck));
        }
        // Acyclicity plus finiteness already imply every node reaches a
        // sink; assert it anyway since the process relies on it.
        let mut reaches_mouth = vec![false; nodes.len()];
        for &i in topo.iter().rev() {
            reaches_mouth[i] =
                succ[i].is_empty() || succ[i].iter().any(|&s| reaches_mouth[s]);
        }
        assert!(
            reaches_mouth.iter().all(|&r| r),
            "acyclic basin with a node that reaches no mouth"
        );

        for node in &nodes {
            if node.claim < Q::zero() {
                return Err(BasinError::NegativeClaim(node.id.clone()));
            }
            if let Some(g) = &node.gamma {
                if *g < Q::zero() || *g > Q::one() {
                    return Err(BasinError::NodeGammaOutOfRange(node.id.clone()));
                }
            }
        }
        let aggregate = total(&nodes.iter().map(|n| n.claim.clone()).collect::<Vec<_>>());
        if aggregate == Q::zero() {
            return Err(BasinError::ZeroAggregateClaim);
        }
        if budget < Q::zero() {
            return Err(BasinError::NegativeBudget);
        }
        if budget > aggregate {
            return Err(BasinError::BudgetExceedsAggregate);
        }

        Ok(Self {
            nodes,
            succ,
            topo,
            budget,
            aggregate,
        })
    }

    /// Chain basin `1 → 2 → … → n` from a claims vector.
    pub fn chain(claims: &[Q], budget: Q) -> Result<Self, BasinError> {
        let nodes = claims
            .iter()
            .enumerate()
            .map(|(i, c)| BasinNode::new((i + 1).to_string(), c.clone()))
            .collect();
        let edges: Vec<(String, String)> = (1..claims.len())
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        Self::new(nodes, &edges, budget)
    }

    pub fn nodes(&self) -> &[BasinNode<Q>] {
        &self.nodes
    }

    pub fn budget(&self) -> &Q {
        &self.budget
    }

    pub fn aggregate(&self) -> &Q {
        &self.aggregate
    }

    /// Same graph with a different budget.
    pub fn with_budget(self, budget: Q) -> Result<Self, BasinError> {
        if budget < Q::zero() {
            return Err(BasinError::NegativeBudget);
        }
        if budget > self.aggregate {
            return Err(BasinError::BudgetExceedsAggregate);
        }
        Ok(Self { budget, ..self })
    }

    /// Node ids of the mouths (sinks).
    pub fn mouths(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.succ[*i].is_empty())
            .map(|(_, n)| n.id.as_str())
            .collect()
    }
}

/// Result of the basin process: awards and retained shares keyed by node
/// id, in node input order.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinAllocation<Q: Quantity> {
    awards: IndexMap<String, Q>,
    retained: IndexMap<String, Q>,
}

impl<Q: Quantity> BasinAllocation<Q> {
    /// Awards (`r_i * E / C`) keyed by node id.
    pub fn awards(&self) -> &IndexMap<String, Q> {
        &self.awards
    }

    /// Retained shares (`Σ r = C`) keyed by node id.
    pub fn retained(&self) -> &IndexMap<String, Q> {
        &self.retained
    }

    pub fn award(&self, id: &str) -> Option<&Q> {
        self.awards.get(id)
    }
}

/// Run the geometric process on a basin with default retention `γ`.
///
/// Per-node `gamma` overrides apply to interior nodes only; mouths retain
/// their entire accumulated mass regardless.
pub fn basin_geometric<Q: Quantity>(
    graph: &BasinGraph<Q>,
    gamma: &GammaParam<Q>,
) -> BasinAllocation<Q> {
    let n = graph.nodes.len();
    let mut inflow = vec![Q::zero(); n];
    let mut retained_by_index = vec![Q::zero(); n];
    for &i in &graph.topo {
        let node = &graph.nodes[i];
        let mass = node.claim.clone() + inflow[i].clone();
        let successors = &graph.succ[i];
        if successors.is_empty() {
            retained_by_index[i] = mass;
            continue;
        }
        let g = node.gamma.clone().unwrap_or_else(|| gamma.value().clone());
        let kept = g * mass.clone();
        let residual = mass - kept.clone();
        let share = residual / Q::from_int(successors.len() as i64);
        for &s in successors {
            inflow[s] = inflow[s].clone() + share.clone();
        }
        retained_by_index[i] = kept;
    }

    let ratio = graph.budget.clone() / graph.aggregate.clone();
    let mut awards = IndexMap::with_capacity(n);
    let mut retained = IndexMap::with_capacity(n);
    for (i, node) in graph.nodes.iter().enumerate() {
        let r = retained_by_index[i].clone();
        awards.insert(node.id.clone(), r.clone() * ratio.clone());
        retained.insert(node.id.clone(), r);
    }
    // Conservation: retained shares sum to the aggregate claim, so awards
    // sum to the budget. Allocation::balanced revalidates that.
    let _ = Allocation::balanced(awards.values().cloned().collect(), &graph.budget);
    BasinAllocation { awards, retained }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::Rational;
    use crate::rules::geometric_retained;
    use crate::Problem;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| Rational::from_int(v)).collect()
    }

    fn node(id: &str, claim: i64) -> BasinNode<Rational> {
        BasinNode::new(id, Rational::from_int(claim))
    }

    fn edges(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs
            .iter()
            .map(|(f, t)| (f.to_string(), t.to_string()))
            .collect()
    }

    #[test]
    fn chain_basin_matches_the_line_process() {
        let claims = ints(&[2, 5, 5, 3]);
        let graph = BasinGraph::chain(&claims, Rational::from_int(5)).unwrap();
        let gamma = GammaParam::ratio(1, 2);
        let result = basin_geometric(&graph, &gamma);
        let p = Problem::new(claims, Rational::from_int(5)).unwrap();
        let line = geometric_retained(&p, &gamma);
        for (i, r) in line.iter().enumerate() {
            assert_eq!(result.retained()[&(i + 1).to_string()], *r);
        }
    }

    #[test]
    fn branching_basin_splits_residual_equally() {
        // 1 feeds 2 and 3; 3 feeds 4 and 5; 5 feeds 6. Mouths: 2, 4, 6.
        let graph = BasinGraph::new(
            vec![
                node("1", 2),
                node("2", 5),
                node("3", 5),
                node("4", 3),
                node("5", 6),
                node("6", 8),
            ],
            &edges(&[("1", "2"), ("1", "3"), ("3", "4"), ("3", "5"), ("5", "6")]),
            Rational::from_int(5),
        )
        .unwrap();
        assert_eq!(graph.mouths(), vec!["2", "4", "6"]);
        let result = basin_geometric(&graph, &GammaParam::ratio(1, 2));
        let want_retained = [
            ("1", rat(1, 1)),
            ("2", rat(11, 2)),
            ("3", rat(11, 4)),
            ("4", rat(35, 8)),
            ("5", rat(59, 16)),
            ("6", rat(187, 16)),
        ];
        for (id, r) in want_retained {
            assert_eq!(result.retained()[id], r, "retained share of node {id}");
        }
        assert_eq!(result.awards()["6"], rat(935, 464));
    }

    #[test]
    fn confluence_sums_inflows_before_retention() {
        // Diamond: 1 feeds 2 and 3, both feed 4, which feeds mouth 5.
        let graph = BasinGraph::new(
            vec![node("1", 2), node("2", 5), node("3", 5), node("4", 3), node("5", 6)],
            &edges(&[("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "5")]),
            Rational::from_int(5),
        )
        .unwrap();
        let result = basin_geometric(&graph, &GammaParam::ratio(1, 2));
        assert_eq!(result.retained()["4"], rat(17, 4));
        assert_eq!(result.retained()["5"], rat(41, 4));
        assert_eq!(result.awards()["5"], rat(205, 84));
    }

    #[test]
    fn per_node_gamma_overrides_the_default_but_not_at_mouths() {
        let graph = BasinGraph::new(
            vec![
                node("a", 4),
                BasinNode::new("b", Rational::from_int(4)).with_gamma(rat(1, 4)),
                // A mouth-side γ must be ignored.
                BasinNode::new("c", Rational::from_int(4)).with_gamma(rat(0, 1)),
            ],
            &edges(&[("a", "b"), ("b", "c")]),
            Rational::from_int(12),
        )
        .unwrap();
        let result = basin_geometric(&graph, &GammaParam::ratio(1, 2));
        // a: keeps 2, passes 2. b: mass 6, keeps 6/4, passes 9/2.
        // c: mouth, keeps 4 + 9/2 despite its γ = 0.
        assert_eq!(result.retained()["a"], rat(2, 1));
        assert_eq!(result.retained()["b"], rat(3, 2));
        assert_eq!(result.retained()["c"], rat(17, 2));
    }

    #[test]
    fn cycles_and_missing_mouths_are_rejected() {
        let err = BasinGraph::new(
            vec![node("a", 1), node("b", 1), node("c", 1)],
            &edges(&[("a", "b"), ("b", "a"), ("b", "c")]),
            Rational::from_int(1),
        )
        .unwrap_err();
        // The stuck set covers the cycle and its downstream node.
        assert_eq!(
            err,
            BasinError::CycleDetected(vec!["a".to_owned(), "b".to_owned(), "c".to_owned()])
        );

        let err = BasinGraph::new(
            vec![node("a", 1), node("b", 1)],
            &edges(&[("a", "b"), ("b", "a")]),
            Rational::from_int(1),
        )
        .unwrap_err();
        assert_eq!(err, BasinError::NoMouth);
    }

    #[test]
    fn structural_defects_are_rejected() {
        let budget = || Rational::from_int(1);
        assert_eq!(
            BasinGraph::new(vec![], &[], budget()).unwrap_err(),
            BasinError::EmptyGraph
        );
        assert_eq!(
            BasinGraph::new(vec![node("a", 1), node("a", 2)], &[], budget()).unwrap_err(),
            BasinError::DuplicateNode("a".to_owned())
        );
        assert_eq!(
            BasinGraph::new(vec![node("a", 1)], &edges(&[("a", "zz")]), budget()).unwrap_err(),
            BasinError::UnknownNode("zz".to_owned())
        );
        assert_eq!(
            BasinGraph::new(vec![node("a", 1)], &edges(&[("a", "a")]), budget()).unwrap_err(),
            BasinError::SelfLoop("a".to_owned())
        );
        assert_eq!(
            BasinGraph::new(
                vec![node("a", 1), node("b", 1)],
                &edges(&[("a", "b"), ("a", "b")]),
                budget()
            )
            .unwrap_err(),
            BasinError::DuplicateEdge("a".to_owned(), "b".to_owned())
        );
    }

    #[test]
    fn numeric_defects_are_rejected() {
        assert_eq!(
            BasinGraph::new(
                vec![BasinNode::new("a", rat(-1, 2))],
                &[],
                Rational::from_int(0)
            )
            .unwrap_err(),
            BasinError::NegativeClaim("a".to_owned())
        );
        assert_eq!(
            BasinGraph::new(vec![node("a", 0)], &[], Rational::from_int(0)).unwrap_err(),
            BasinError::ZeroAggregateClaim
        );
        assert_eq!(
            BasinGraph::new(vec![node("a", 1)], &[], Rational::from_int(2)).unwrap_err(),
            BasinError::BudgetExceedsAggregate
        );
        assert_eq!(
            BasinGraph::new(
                vec![BasinNode::new("a", Rational::from_int(1)).with_gamma(rat(3, 2))],
                &[],
                Rational::from_int(1)
            )
            .unwrap_err(),
            BasinError::NodeGammaOutOfRange("a".to_owned())
        );
    }
}
