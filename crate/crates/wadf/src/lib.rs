//! Exact reasoning engine for weighted abstract dialectical frameworks.
//!
//! Statements carry acceptance conditions, propositional formulas over
//! fellow statements and value constants, interpreted in a pluggable
//! valuation structure: two-valued, the unit interval under two
//! orderings, finite level grids, Belnap's four values, interval grids,
//! or user-declared partial orders. The characteristic operator, the
//! standard semantics (admissible, complete, grounded, preferred, model,
//! stable), and decision queries are all computed exactly over arbitrary
//! precision rationals.

pub mod formula;
pub mod framework;
pub mod operator;
pub mod oracle;
pub mod rational;
pub mod semantics;
pub mod valuation;

pub use formula::{parse_formula, Formula, ValueRange};
pub use framework::{parse_framework, serialize_framework, Framework};
pub use operator::{
    gamma, kleene_iterate, EngineChoice, EngineConfig, Interpretation, IterationOutcome,
};
pub use semantics::{AssumedValueSet, SemanticsName, StableVerdict};
pub use valuation::{PartialValue, TruthValue, ValuationStructure};
