//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("base dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("degree mismatch for {what}: expected {expected}, found {found}")]
    DegreeMismatch {
        what: String,
        expected: String,
        found: String,
    },

    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("d^2 != 0 on generator {gen}: residue {residue}")]
    DSquared { gen: String, residue: String },

    #[error("chain-map condition fails on generator {gen}: residue {residue}")]
    ChainMap { gen: String, residue: String },

    #[error("value assigned to {gen} is not a cycle: d gives {residue}")]
    NotACycle { gen: String, residue: String },

    #[error("value assigned to {gen} does not lie in the base algebra (unknown generator {unknown})")]
    NotInBase { gen: String, unknown: String },

    #[error("unknown generator {0}")]
    UnknownGenerator(String),

    #[error("no assignment for generator {0}")]
    MissingAssignment(String),

    #[error("jet/operator order window exceeded: order {found} > bound {bound} on {what}")]
    WindowExit {
        what: String,
        found: u32,
        bound: u32,
    },

    #[error("rewrite rule does not decrease the monomial order: {0}")]
    NonTerminatingRule(String),

    #[error("no preimage in the truncated window for {0}")]
    NoPreimage(String),

    #[error("budget element rejected: {0}")]
    BudgetRejected(String),

    #[error("budget closure failure: missing index {missing} ({kind})")]
    BudgetClosure { kind: String, missing: String },

    #[error("Noether identity {index} fails: residue {residue}")]
    NoetherFailure { index: usize, residue: String },

    #[error("morphism targets differ")]
    TargetMismatch,

    #[error("square does not commute: {0}")]
    SquareMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
