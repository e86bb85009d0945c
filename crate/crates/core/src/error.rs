use thiserror::Error;

/// Errors produced by the word, counting, ranking and codec layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A word that must be irreducible contains a tandem repeat.
    #[error("word {0} is not irreducible")]
    NotIrreducible(String),

    /// A rank lies outside `[1, size]`.
    #[error("rank {rank} out of range 1..={size}")]
    RankOutOfRange { rank: String, size: String },

    /// The received word cannot descend from any codeword of the code.
    #[error("root of length {root_len} exceeds codeword length {n}")]
    NotADescendant { root_len: usize, n: usize },

    /// `(from, to)` is not an edge of the state graph.
    #[error("{to} is not a neighbour of {from}")]
    NotAnEdge { from: String, to: String },

    /// The edge exists but its index is beyond the `q^ell` labelled neighbours.
    #[error("edge {from} -> {to} has index {index}, beyond the {labelled} labelled neighbours")]
    UnlabeledEdge {
        from: String,
        to: String,
        index: String,
        labelled: String,
    },

    /// Encoded data does not decode consistently.
    #[error("corrupt input: {0}")]
    Corrupt(String),

    /// A table would be too large to materialize.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A brute-force oracle hit its budget.
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
