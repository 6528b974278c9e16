use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Skin depth of a lossless medium is unbounded.
    #[error("infinite skin depth: conductivity is zero (lossless medium must be handled explicitly)")]
    InfiniteSkinDepth,

    #[error("singular configuration: {0}")]
    Singular(String),

    /// The oscillatory tail did not settle within the configured number of intervals.
    #[error("tail did not converge: last partial sums {last} and {previous}")]
    Convergence {
        last: num_complex::Complex64,
        previous: num_complex::Complex64,
    },

    #[error("field map failed at every grid point")]
    MapFailed,

    #[error("unidentifiable data: {0}")]
    Unidentifiable(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
