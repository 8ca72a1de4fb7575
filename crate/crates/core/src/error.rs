use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("variable spaces differ: {0}")]
    VarSpaceMismatch(String),
    #[error("indecisive pole in {var}: form {form}, root modulus in [{min}, {max}] vs radius {radius}")]
    IndecisivePole {
        var: String,
        form: String,
        min: String,
        max: String,
        radius: String,
    },
    #[error("nonlinear denominator in {0}")]
    Nonlinear(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("requested term lies beyond the truncation bound: {0}")]
    Bound(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pole on integration contour: {0}")]
    PoleOnContour(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
