use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parity: {0}")]
    Parity(String),
    #[error("quadrature: {0}")]
    Quadrature(String),
    #[error("eigensolver: {0}")]
    Eigensolver(String),
}

impl Error {
    /// Short machine-readable tag used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole(_) => "PoleError",
            Error::Domain(_) => "DomainError",
            Error::NonConvergence(_) => "NonConvergence",
            Error::Overflow(_) => "OverflowError",
            Error::Resource(_) => "ResourceError",
            Error::Parity(_) => "ParityError",
            Error::Quadrature(_) => "QuadratureError",
            Error::Eigensolver(_) => "EigensolverError",
        }
    }

    /// Configuration errors (bad input domain or parameters) versus numerical failures.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Parity(_) | Error::Resource(_))
    }
}
