use thiserror::Error;

/// Errors produced by the core library.
///
/// Input errors (bad `n`, exceeded caps, malformed vertex sets) are kept
/// apart from the structural variants, which signal that a computed object
/// contradicts something that must hold for every valid input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("n = {0} is outside the supported range 2 <= n < 2^63")]
    OutOfRange(u64),

    #[error("n = {0} is prime; the ring Z_n has no nonzero proper ideals")]
    PrimeInput(u64),

    #[error("n = {n} has {k} distinct prime factors, above the cap of {max}")]
    TooManyPrimes { n: u64, k: usize, max: usize },

    #[error("n = {n} gives {t} vertices, above the cap of {max}")]
    TooManyVertices { n: u64, t: u64, max: u64 },

    #[error("n = {0} is not squarefree")]
    NotSquarefree(u64),

    #[error("{0} is not a proper divisor of n greater than 1")]
    NotAVertex(u64),

    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is disconnected: no path between vertices {0} and {1}")]
    Disconnected(usize, usize),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a
    /// violated internal invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Disconnected(..) | Error::Overflow(_) | Error::Inconsistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
