//! Allocation rules, axiom checkers, and threshold analysis for river
//! pollution permit problems.
//!
//! A problem is a claim vector `c` (agents ordered source → mouth) plus a
//! permit budget `E` with `0 <= E <= sum(c)`. The crate provides:
//!
//! * the proportional, full-transfer, averaging, geometric, and
//!   generalized geometric rules ([`rules`]);
//! * the same geometric process on branching basins ([`basin`]);
//! * executable axiom checkers with seeded counterexample search
//!   ([`axioms`]);
//! * claims-boundedness thresholds, parameter sweeps, and family
//!   comparisons ([`analysis`]);
//! * the embedded datasets used by the bundled case study ([`datasets`]).
//!
//! Everything is generic over [`quantity::Quantity`], with an exact
//! rational backend and an `f64` backend.

pub mod analysis;
pub mod axioms;
pub mod basin;
pub mod datasets;
pub mod problem;
pub mod quantity;
pub mod rules;

pub use problem::{Allocation, Problem, ProblemError};
pub use quantity::{Quantity, Rational, FLOAT_EQ_TOL};
