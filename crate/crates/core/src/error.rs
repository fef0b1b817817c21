use thiserror::Error;

/// Errors raised by the library. Check failures are not errors; they are
/// reported through [`crate::report::Status`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed hypergraph: {0}")]
    Malformed(String),
    #[error("color {0} mixes edges of different sizes")]
    MixedUniformity(usize),
    #[error("color {0} repeats an edge")]
    DuplicateEdge(usize),
    #[error("color {0} has no edges")]
    EmptyColor(usize),
    #[error("weight function does not cover the hypergraph")]
    NotCovering,
    #[error("vertex {0} lies in no edge")]
    IsolatedVertex(usize),
    #[error("flat for edge {0} has the wrong dimension")]
    DimensionMismatch(usize),
    #[error("point is not on the flat for edge {0}")]
    PointNotOnFlat(usize),
    #[error("more than {0} witness tuples")]
    CapExceeded(usize),
    #[error("candidate budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("field too small: need more than {needed} elements")]
    FieldTooSmall { needed: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("projection stayed degenerate after {0} attempts")]
    GenericityFailure(usize),
    #[error("negative multiplicity {0}")]
    NegativeValue(i64),
    #[error("empty tuple set")]
    EmptyTupleSet,
    #[error("a row of x sums to more than A")]
    RowSumExceedsA,
    #[error("host is not {0}-uniform")]
    UniformityMismatch(usize),
    #[error("work limit of {0} exceeded")]
    WorkLimitExceeded(u64),
    #[error("derivative order exceeds degree {0}")]
    DegreeOverflow(usize),
    #[error("joint {0} has no chart on the flat")]
    ChartMissing(usize),
    #[error("ledgers were built with different handicaps or preassigned orders")]
    InconsistentLedgers,
    #[error("configuration is not connected")]
    NotConnected,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
