//! Deterministic instance generation for the axiom checkers.
//!
//! Every random draw is an integer fed through `Q::ratio`, so a seed
//! produces the *same* instances under the exact and float backends.
//! Fixtures known to separate the rule families are emitted before any
//! random instance, which keeps counterexamples stable across runs.

use super::{Axiom, AxiomInstance, CheckConfig};
use crate::problem::Problem;
use crate::quantity::Quantity;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shape of randomly drawn problems.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Agents per problem, inclusive bounds.
    pub n_range: (usize, usize),
    /// Nonzero claims are numer/denom with numer in `1..=claim_numer_max`.
    pub claim_numer_max: i64,
    /// … and denom in `1..=claim_denom_max`.
    pub claim_denom_max: i64,
    /// Chance that an individual claim is zero (an all-zero vector is
    /// redrawn).
    pub zero_claim_probability: f64,
    /// Force the budget to equal the aggregate claim.
    pub redistribution_only: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        let check = CheckConfig::default();
        Self {
            n_range: check.n_range,
            claim_numer_max: check.claim_numer_max,
            claim_denom_max: check.claim_denom_max,
            zero_claim_probability: check.zero_claim_probability,
            redistribution_only: false,
        }
    }
}

impl CheckConfig {
    fn gen_config(&self, redistribution_only: bool) -> GenConfig {
        GenConfig {
            n_range: self.n_range,
            claim_numer_max: self.claim_numer_max,
            claim_denom_max: self.claim_denom_max,
            zero_claim_probability: self.zero_claim_probability,
            redistribution_only,
        }
    }
}

/// Budgets are drawn on a sixteenth grid of the aggregate claim.
const BUDGET_GRID: i64 = 16;

fn draw_flag(rng: &mut ChaCha8Rng, probability: f64) -> bool {
    rng.random_range(0u32..1_000_000) < (probability * 1e6) as u32
}

fn draw_claims<Q: Quantity>(rng: &mut ChaCha8Rng, n: usize, config: &GenConfig) -> Vec<Q> {
    loop {
        let claims: Vec<Q> = (0..n)
            .map(|_| {
                if draw_flag(rng, config.zero_claim_probability) {
                    Q::zero()
                } else {
                    Q::ratio(
                        rng.random_range(1..=config.claim_numer_max),
                        rng.random_range(1..=config.claim_denom_max),
                    )
                }
            })
            .collect();
        if claims.iter().any(|c| *c != Q::zero()) {
            return claims;
        }
    }
}

fn draw_problem<Q: Quantity>(rng: &mut ChaCha8Rng, config: &GenConfig) -> Problem<Q> {
    let n = rng.random_range(config.n_range.0..=config.n_range.1);
    let claims: Vec<Q> = draw_claims(rng, n, config);
    let aggregate = crate::quantity::total(&claims);
    let budget = if config.redistribution_only {
        aggregate
    } else {
        Q::ratio(rng.random_range(0..=BUDGET_GRID), BUDGET_GRID) * aggregate
    };
    Problem::new(claims, budget).expect("drawn problem is valid by construction")
}

/// Draw `count` problems from a seed. The stream is reproducible and
/// identical across numeric backends.
pub fn gen_problems<Q: Quantity>(seed: u64, config: &GenConfig, count: usize) -> Vec<Problem<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| draw_problem(&mut rng, config)).collect()
}

/// Give each axiom its own decorrelated stream for one configured seed.
fn axiom_rng(axiom: Axiom, config: &CheckConfig) -> ChaCha8Rng {
    let index = Axiom::all()
        .iter()
        .position(|a| *a == axiom)
        .expect("axiom listed") as u64;
    ChaCha8Rng::seed_from_u64(
        config
            .seed
            .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    )
}

/// Produce the instance stream for one axiom: fixtures first, then
/// `config.samples` random instances (merging/splitting is a fixed
/// enumeration of unit problems instead).
pub(super) fn gen_instances<Q: Quantity>(
    axiom: Axiom,
    config: &CheckConfig,
) -> Vec<AxiomInstance<Q>> {
    let mut rng = axiom_rng(axiom, config);
    let any = config.gen_config(false);
    let redis = config.gen_config(true);
    let mut out: Vec<AxiomInstance<Q>> = Vec::new();
    match axiom {
        Axiom::ScaleInvariance => {
            for _ in 0..config.samples {
                let problem = draw_problem(&mut rng, &any);
                let mu = Q::ratio(rng.random_range(1..=8), rng.random_range(1..=4));
                out.push(AxiomInstance::Scale { problem, mu });
            }
        }
        Axiom::BudgetAdditivity => {
            for _ in 0..config.samples {
                let problem: Problem<Q> = draw_problem(&mut rng, &any);
                let first_part =
                    Q::ratio(rng.random_range(0..=BUDGET_GRID), BUDGET_GRID) * problem.budget().clone();
                out.push(AxiomInstance::BudgetSplit {
                    problem,
                    first_part,
                });
            }
        }
        Axiom::UpstreamInvariance => {
            for _ in 0..config.samples {
                let problem: Problem<Q> = draw_problem(&mut rng, &redis);
                let agent = rng.random_range(0..problem.len());
                let delta = Q::ratio(rng.random_range(1..=8), rng.random_range(1..=2));
                out.push(AxiomInstance::UpstreamRaise {
                    problem,
                    agent,
                    delta,
                });
            }
        }
        Axiom::EqualSinglePolluters => {
            // Two distinct positions are needed; without the mouth that
            // means at least three agents.
            let min_n = if config.extended_polluter_positions { 2 } else { 3 };
            let lo = config.n_range.0.max(min_n);
            let hi = config.n_range.1.max(lo);
            for _ in 0..config.samples {
                let n = rng.random_range(lo..=hi);
                let limit = if config.extended_polluter_positions {
                    n
                } else {
                    n - 1
                };
                let position_a = rng.random_range(0..limit - 1);
                let position_b = rng.random_range(position_a + 1..limit);
                let budget = Q::ratio(
                    rng.random_range(1..=config.claim_numer_max),
                    rng.random_range(1..=2),
                );
                out.push(AxiomInstance::SinglePolluter {
                    n,
                    budget,
                    position_a,
                    position_b,
                });
            }
        }
        Axiom::TopConsistency => {
            // The axiom lives on the redistribution domain: off it, the
            // reduction changes the budget ratio and the identity fails
            // even for the proportional rule.
            out.push(AxiomInstance::TopReduction {
                problem: Problem::from_ints(&[2, 2, 2], 6),
            });
            for _ in 0..config.samples {
                out.push(AxiomInstance::TopReduction {
                    problem: draw_problem(&mut rng, &redis),
                });
            }
        }
        Axiom::EqualClaims => {
            out.push(AxiomInstance::EqualClaimsPair {
                problem: Problem::from_ints(&[2, 2], 4),
                agent_a: 0,
                agent_b: 1,
            });
            let mut produced = 0;
            while produced < config.samples {
                let problem: Problem<Q> = draw_problem(&mut rng, &any);
                if problem.len() < 2 {
                    continue;
                }
                let agent_a = rng.random_range(0..problem.len() - 1);
                let agent_b = rng.random_range(agent_a + 1..problem.len());
                let mut claims = problem.claims().to_vec();
                claims[agent_b] = claims[agent_a].clone();
                let aggregate = crate::quantity::total(&claims);
                if aggregate == Q::zero() {
                    continue;
                }
                let budget = if *problem.budget() > aggregate {
                    aggregate
                } else {
                    problem.budget().clone()
                };
                let problem = Problem::new(claims, budget)
                    .expect("equalized problem is valid by construction");
                out.push(AxiomInstance::EqualClaimsPair {
                    problem,
                    agent_a,
                    agent_b,
                });
                produced += 1;
            }
        }
        Axiom::Additivity => {
            out.push(AxiomInstance::AdditivePair {
                first: Problem::from_ints(&[2, 0, 0], 1),
                second: Problem::from_ints(&[0, 1, 0], 1),
            });
            for _ in 0..config.samples {
                let first: Problem<Q> = draw_problem(&mut rng, &any);
                let n = first.len();
                let claims: Vec<Q> = draw_claims(&mut rng, n, &any);
                let aggregate = crate::quantity::total(&claims);
                let budget =
                    Q::ratio(rng.random_range(0..=BUDGET_GRID), BUDGET_GRID) * aggregate;
                let second = Problem::new(claims, budget)
                    .expect("drawn problem is valid by construction");
                out.push(AxiomInstance::AdditivePair { first, second });
            }
        }
        Axiom::MergingSplitting => {
            for n in 2..=config.merging_n_max {
                out.push(AxiomInstance::UnitMerge { n });
            }
        }
        Axiom::BudgetLinearity => {
            for _ in 0..config.samples {
                let problem = draw_problem(&mut rng, &any);
                let alpha = Q::ratio(rng.random_range(0..=BUDGET_GRID), BUDGET_GRID);
                out.push(AxiomInstance::BudgetScale { problem, alpha });
            }
        }
        Axiom::Continuity => {
            let epsilon = || Q::ratio(config.epsilon.0, config.epsilon.1);
            // Random draws almost never straddle a jump; probe problems
            // whose running claim totals sit exactly on small integers,
            // where step-shaped transfer functions put their breaks.
            for claims in [&[1i64, 1, 1][..], &[2, 1][..]] {
                let total: i64 = claims.iter().sum();
                out.push(AxiomInstance::Perturb {
                    problem: Problem::from_ints(claims, total),
                    epsilon: epsilon(),
                    lipschitz: config.lipschitz,
                });
            }
            for _ in 0..config.samples {
                out.push(AxiomInstance::Perturb {
                    problem: draw_problem(&mut rng, &any),
                    epsilon: epsilon(),
                    lipschitz: config.lipschitz,
                });
            }
        }
    }
    out
}
