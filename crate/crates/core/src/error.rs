use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("congruence modulus must be at least 1 (at byte {position})")]
    ZeroModulus { position: usize },

    #[error("numeral out of range at byte {position}")]
    NumeralOverflow { position: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("formula is not quantifier-free")]
    NotQuantifierFree,

    #[error("sentence expected, but found free variables: {0:?}")]
    FreeVariables(Vec<String>),

    #[error("resource limit exceeded: {what} (budget {budget})")]
    Budget { what: &'static str, budget: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid interpretation: {0}")]
    InvalidInterpretation(String),

    #[error("point {0:?} is outside the domain")]
    OutsideDomain(Vec<u64>),

    #[error("iteration bound exceeded: rank above {0}")]
    RankBound(usize),

    #[error("exact fit impossible: {0}")]
    FitFailed(String),

    #[error("spine synthesis failed: {0}")]
    SpineSynthesis(String),

    #[error("unsupported condensation shape: {0}")]
    UnsupportedShape(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
