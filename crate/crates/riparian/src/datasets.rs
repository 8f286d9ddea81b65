//! Embedded case-study datasets and their expected outputs.
//!
//! The bundled study covers six cities along the Tuojiang river. All
//! numbers live here as decimal strings so the exact backend parses them
//! losslessly, plus the expected results the `reproduce` workflow and the
//! acceptance suite diff against: comparison tables at five parameter
//! values (2-decimal prints), claims-boundedness thresholds, and the
//! branching-basin fixtures with exact retained shares.

use crate::basin::{BasinGraph, BasinNode};
use crate::problem::Problem;
use crate::quantity::Quantity;

/// Cities in upstream → downstream order; Luzhou is the mouth.
pub const CITY_NAMES: [&str; 6] = [
    "Deyang", "Chengdu", "Ziyang", "Neijiang", "Zigong", "Luzhou",
];

/// Ammonia discharge claims (10⁴ t/year), same order as [`CITY_NAMES`].
pub const BASE_CLAIMS: [&str; 6] = ["4.17", "53.98", "2.13", "3.30", "2.48", "15.18"];

/// Permitted total discharge; the aggregate claim is 81.24.
pub const BASE_BUDGET: &str = "64.3";

/// Hypothetical variant: the dominant claim cut back and the three
/// midstream cities levelled at 14, keeping the aggregate at 81.24.
pub const EQUALIZED_CLAIMS: [&str; 6] = ["4.17", "19.89", "14", "14", "14", "15.18"];

/// Hypothetical variant: the two most upstream claims swapped, so the
/// largest discharger sits at the source.
pub const SWAPPED_CLAIMS: [&str; 6] = ["53.98", "4.17", "2.13", "3.30", "2.48", "15.18"];

/// Parameter grid used by the comparison tables: 0, 1/4, 1/2, 3/4, 1.
pub const PARAM_GRID: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

/// Build a problem from decimal-string claims and budget.
pub fn problem_from_decimals<Q: Quantity>(claims: &[&str], budget: &str) -> Problem<Q> {
    let claims = claims
        .iter()
        .map(|c| Q::from_decimal_str(c).expect("embedded claim parses"))
        .collect();
    let budget = Q::from_decimal_str(budget).expect("embedded budget parses");
    Problem::new(claims, budget).expect("embedded dataset is a valid problem")
}

/// The six-city problem with the historical claims.
pub fn base_problem<Q: Quantity>() -> Problem<Q> {
    problem_from_decimals(&BASE_CLAIMS, BASE_BUDGET)
}

/// The levelled-claims hypothetical, same budget.
pub fn equalized_problem<Q: Quantity>() -> Problem<Q> {
    problem_from_decimals(&EQUALIZED_CLAIMS, BASE_BUDGET)
}

/// The swapped-claims hypothetical, same budget.
pub fn swapped_problem<Q: Quantity>() -> Problem<Q> {
    problem_from_decimals(&SWAPPED_CLAIMS, BASE_BUDGET)
}

/// The worked four-agent chain ((2, 5, 5, 3), 5).
pub fn worked_chain<Q: Quantity>() -> Problem<Q> {
    Problem::from_ints(&WORKED_CHAIN_CLAIMS, WORKED_CHAIN_BUDGET)
}

pub const WORKED_CHAIN_CLAIMS: [i64; 4] = [2, 5, 5, 3];
pub const WORKED_CHAIN_BUDGET: i64 = 5;

/// γ = 1/2 results on the worked chain: retained shares and exact awards.
pub const WORKED_CHAIN_RETAINED: [(i64, i64); 4] = [(1, 1), (3, 1), (4, 1), (7, 1)];
pub const WORKED_CHAIN_AWARDS: [(i64, i64); 4] = [(1, 3), (1, 1), (4, 3), (7, 3)];

/// Small chains used for threshold checks, as (claims, budget).
pub const SMALL_CHAINS: [(&[i64], i64); 3] =
    [(&[2, 2, 2], 4), (&[2, 2, 2, 1], 4), (&[2, 2, 2, 3], 4)];

/// Expected minimum claims-bounded γ for each of [`SMALL_CHAINS`].
pub const SMALL_CHAIN_MIN_GAMMA: [f64; 3] = [0.634, 0.722, 0.217];

/// Expected minimum claims-bounded γ for the three city problems
/// (base, equalized, swapped).
pub const CITY_MIN_GAMMA: [f64; 3] = [0.989, 0.778, 0.977];

/// Expected minimum claims-bounded λ; identical for all three city
/// problems because they share the mouth claim and the aggregate.
pub const CITY_MIN_LAMBDA: f64 = 0.94;

/// At the base threshold the binding constraint is Ziyang's claim.
pub const BASE_GAMMA_BINDING_CITY: &str = "Ziyang";

// ---- expected comparison tables -------------------------------------------
//
// Rows follow CITY_NAMES; columns follow PARAM_GRID. Values are the
// published 2-decimal prints; comparisons allow ±0.01.

/// Expected table for the base problem.
pub const BASE_EXPECTED_GEOMETRIC: [[f64; 5]; 6] = [
    [0.0, 0.83, 1.65, 2.48, 3.30],
    [0.0, 11.30, 22.19, 32.66, 42.72],
    [0.0, 8.90, 11.94, 9.43, 1.69],
    [0.0, 7.33, 7.27, 4.32, 2.61],
    [0.0, 5.98, 4.62, 2.55, 1.96],
    [64.30, 29.97, 16.63, 12.87, 12.01],
];

pub const BASE_EXPECTED_AVERAGING: [[f64; 5]; 6] = [
    [0.0, 0.83, 1.65, 2.48, 3.30],
    [0.0, 10.68, 21.36, 32.04, 42.72],
    [0.0, 0.42, 0.84, 1.26, 1.69],
    [0.0, 0.65, 1.31, 1.96, 2.61],
    [0.0, 0.49, 0.98, 1.47, 1.96],
    [64.30, 51.23, 38.16, 25.09, 12.01],
];

/// Expected table for the equalized variant.
pub const EQUALIZED_EXPECTED_GEOMETRIC: [[f64; 5]; 6] = [
    [0.0, 0.83, 1.65, 2.48, 3.30],
    [0.0, 4.55, 8.70, 12.43, 15.74],
    [0.0, 6.19, 9.89, 11.42, 11.08],
    [0.0, 7.41, 10.48, 11.16, 11.08],
    [0.0, 8.33, 10.78, 11.10, 11.08],
    [64.30, 37.00, 22.80, 15.72, 12.01],
];

pub const EQUALIZED_EXPECTED_AVERAGING: [[f64; 5]; 6] = [
    [0.0, 0.83, 1.65, 2.48, 3.30],
    [0.0, 3.94, 7.87, 11.81, 15.74],
    [0.0, 2.77, 5.54, 8.31, 11.08],
    [0.0, 2.77, 5.54, 8.31, 11.08],
    [0.0, 2.77, 5.54, 8.31, 11.08],
    [64.30, 51.23, 38.16, 25.09, 12.01],
];

/// Expected table for the swapped variant.
pub const SWAPPED_EXPECTED_GEOMETRIC: [[f64; 5]; 6] = [
    [0.0, 10.68, 21.36, 32.04, 42.72],
    [0.0, 8.84, 12.33, 10.49, 3.30],
    [0.0, 7.05, 7.01, 3.89, 1.69],
    [0.0, 5.94, 4.81, 2.93, 2.61],
    [0.0, 4.95, 3.39, 2.20, 1.96],
    [64.30, 26.85, 15.40, 12.75, 12.01],
];

pub const SWAPPED_EXPECTED_AVERAGING: [[f64; 5]; 6] = [
    [0.0, 10.68, 21.36, 32.04, 42.72],
    [0.0, 0.83, 1.65, 2.48, 3.30],
    [0.0, 0.42, 0.84, 1.26, 1.69],
    [0.0, 0.65, 1.31, 1.96, 2.61],
    [0.0, 0.49, 0.98, 1.47, 1.96],
    [64.30, 51.23, 38.16, 25.09, 12.01],
];

// ---- basin fixtures --------------------------------------------------------

/// Branching fixture: node 1 feeds 2 and 3, node 3 feeds 4 and 5, node 5
/// feeds 6. Mouths are 2, 4, 6. Budget 5 against aggregate 29.
pub const BRANCHING_CLAIMS: [i64; 6] = [2, 5, 5, 3, 6, 8];
pub const BRANCHING_EDGES: [(&str, &str); 5] =
    [("1", "2"), ("1", "3"), ("3", "4"), ("3", "5"), ("5", "6")];
pub const BRANCHING_BUDGET: i64 = 5;

/// γ = 1/2 retained shares of the branching fixture (sum = 29).
pub const BRANCHING_RETAINED: [(i64, i64); 6] =
    [(1, 1), (11, 2), (11, 4), (35, 8), (59, 16), (187, 16)];

/// γ = 1/2 awards of the branching fixture.
pub const BRANCHING_AWARDS: [(i64, i64); 6] = [
    (5, 29),
    (55, 58),
    (55, 116),
    (175, 232),
    (295, 464),
    (935, 464),
];

/// A widely circulated print of the last branching award misstates its
/// denominator as 264; the exact value is 935/464. The reproduce report
/// notes the discrepancy instead of failing on it.
pub const BRANCHING_LAST_AWARD_MISPRINT: (i64, i64) = (935, 264);

/// Confluence fixture: 1 feeds 2 and 3, both feed 4, which feeds mouth 5.
/// Budget 5 against aggregate 21.
pub const CONFLUENCE_CLAIMS: [i64; 5] = [2, 5, 5, 3, 6];
pub const CONFLUENCE_EDGES: [(&str, &str); 5] =
    [("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "5")];
pub const CONFLUENCE_BUDGET: i64 = 5;

/// γ = 1/2 retained shares of the confluence fixture (sum = 21).
pub const CONFLUENCE_RETAINED: [(i64, i64); 5] =
    [(1, 1), (11, 4), (11, 4), (17, 4), (41, 4)];

/// γ = 1/2 awards of the confluence fixture.
pub const CONFLUENCE_AWARDS: [(i64, i64); 5] =
    [(5, 21), (55, 84), (55, 84), (85, 84), (205, 84)];

fn basin_from_ints<Q: Quantity>(
    claims: &[i64],
    edges: &[(&str, &str)],
    budget: i64,
) -> BasinGraph<Q> {
    let nodes = claims
        .iter()
        .enumerate()
        .map(|(i, &c)| BasinNode::new((i + 1).to_string(), Q::from_int(c)))
        .collect();
    let edges: Vec<(String, String)> = edges
        .iter()
        .map(|(f, t)| (f.to_string(), t.to_string()))
        .collect();
    BasinGraph::new(nodes, &edges, Q::from_int(budget)).expect("embedded basin is valid")
}

/// The branching fixture as a validated graph.
pub fn branching_basin<Q: Quantity>() -> BasinGraph<Q> {
    basin_from_ints(&BRANCHING_CLAIMS, &BRANCHING_EDGES, BRANCHING_BUDGET)
}

/// The confluence fixture as a validated graph.
pub fn confluence_basin<Q: Quantity>() -> BasinGraph<Q> {
    basin_from_ints(&CONFLUENCE_CLAIMS, &CONFLUENCE_EDGES, CONFLUENCE_BUDGET)
}

/// Published satisfy/violate pattern for the four bundled rules.
///
/// Rows follow `axioms::Axiom::matrix_axioms()` order and carry the axiom's
/// kebab-case name; columns are proportional, full transfer, geometric at
/// γ = 1/2, and averaging at λ = 1/2 — the `axioms::default_rules()` order.
pub const EXPECTED_AXIOM_MATRIX: [(&str, [bool; 4]); 9] = [
    ("scale-invariance", [true, true, true, true]),
    ("budget-additivity", [true, true, true, true]),
    ("upstream-invariance", [true, true, true, true]),
    ("equal-single-polluters", [true, true, true, true]),
    ("top-consistency", [true, true, true, false]),
    ("equal-claims", [true, false, false, false]),
    ("additivity", [false, true, false, false]),
    ("merging-splitting", [true, true, false, true]),
    ("budget-linearity", [true, true, true, true]),
];
