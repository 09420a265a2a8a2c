use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("invalid face pair: face of dimension {k} is not a face of dimension {g}")]
    InvalidPair { k: usize, g: usize },

    /// A membership oracle (NNLS or LP) failed while estimating an angle.
    #[error("numeric failure at sample {sample}: {message}")]
    Numeric { sample: u64, message: String },

    /// An angle estimate inside a face-count sum failed for the term `j`.
    #[error("term j = {j}: {source}")]
    Term {
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("{degenerate} degenerate draws over {replications} replications exceeds the 0.1% limit")]
    ExcessiveDegeneracy { degenerate: u64, replications: u64 },

    #[error("Poisson truncation did not reach tolerance {eps:e}: tail bound {bound:e} at level {level}")]
    Truncation { eps: f64, bound: f64, level: usize },

    #[error("angle cache line {line}: {message}")]
    CacheFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
