use thiserror::Error;

use crate::formula::SyntaxError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lattice must have at least one element")]
    EmptyCarrier,

    #[error("lattice has {size} elements; at most {max} are supported")]
    TooManyElements { size: usize, max: usize },

    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("not a partial order: `{0}` and `{1}` are distinct but each is below the other")]
    NotAPoset(String, String),

    #[error("not a lattice: `{a}` and `{b}` have no {bound}")]
    NotALattice { a: String, b: String, bound: Bound },

    #[error("operation `{0}` is not defined on this lattice")]
    MissingOperation(&'static str),

    #[error("table for `{op}` has {got} entries, expected {expected}")]
    TableShape {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("designated set is not upward closed: `{below}` is designated but `{above}` is not")]
    NotUpwardClosed { below: String, above: String },

    #[error("formula contains a modal operator; only propositional formulas are accepted here")]
    ModalFormulaRejected,

    #[error("variable `{var}` has no value at world `{world}`")]
    UnboundVariable { world: String, var: String },

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("{what} = {value} exceeds the guard of {max}; pass --unsafe-bounds to override")]
    BoundTooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("witness `{kind}` is not applicable: {reason}")]
    WitnessNotApplicable { kind: &'static str, reason: String },

    #[error("base lattice is not a Boolean algebra: {0}")]
    NotBoolean(String),

    #[error(transparent)]
    Syntax(#[from] SyntaxError),

    #[error("malformed input: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    GreatestLower,
    LeastUpper,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::GreatestLower => f.write_str("greatest lower bound"),
            Bound::LeastUpper => f.write_str("least upper bound"),
        }
    }
}
