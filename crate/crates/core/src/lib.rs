//! Quantum link invariants at roots of unity.
//!
//! The crate constructs the two `N^2 x N^2` braiding matrices attached to the
//! `N`-dimensional quantum `sl2` representation at `s = exp(pi*i/N)` — the
//! colored-Jones matrix and the quantum-dilogarithm one — verifies the exact
//! identities relating them (gauge equivalence, Yang-Baxter, enhancement
//! axioms, the appendix sum evaluations), evaluates the associated knot
//! invariant `J_N` from braid words by sparse charge-sector propagation, and
//! fits the exponential growth rate of `|J_N|` against reference hyperbolic
//! volumes.
//!
//! Module map:
//! - [`qarith`]: root-of-unity scalars, q-factorials, appendix sums
//! - [`operator`]: sparse tensor operators, diagram-order composition
//! - [`rmatrix`]: the braiding matrices and every identity check on them
//! - [`repns`]: the two quantum-group representation triples
//! - [`braid`]: braid words, closures, the bundled knot table
//! - [`evaluator`]: `(1,1)`-tangle invariant evaluation
//! - [`volume`]: growth sequences and limit extrapolation
//! - [`verify`]: the named check suites exposed by the CLI

pub mod braid;
pub mod evaluator;
pub mod operator;
pub mod qarith;
pub mod repns;
pub mod rmatrix;
pub mod scalar;
pub mod verify;
pub mod volume;



pub use operator::Operator;
pub use qarith::{QArithError, RootSystem, SumMode};
pub use rmatrix::{EnhancedYb, OperatorKind, RMatrixError};
pub use scalar::{Cx, ExtFloat, Precision, Real};

