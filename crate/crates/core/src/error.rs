use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A derived quantity overflowed to a non-finite value.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A caller-supplied argument is malformed (bad range, bad grid, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A bracketed root search ran out of iterations.
    #[error("root search on {parity:?} branch {branch} did not converge after {iterations} iterations")]
    Convergence {
        parity: crate::Parity,
        branch: usize,
        iterations: usize,
    },

    #[error("symmetric eigen-decomposition failed to converge (n = {0})")]
    EigenSolve(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
