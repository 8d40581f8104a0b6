use thiserror::Error;

/// Malformed textual input (polynomials, tuples, partitions, shapes).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error: {message}")]
pub struct ParseError {
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
        }
    }
}

/// A denominator became identically zero under substitution.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pole: denominator factor `{factor}` vanishes identically")]
pub struct PoleError {
    pub factor: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Pole(#[from] PoleError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("near pole: |{what}| = {magnitude:e} is below tolerance")]
    NearPole { what: String, magnitude: f64 },
    #[error("extrapolation did not converge (spread {spread:e} > tol {tol:e})")]
    NonConvergence { spread: f64, tol: f64 },
    #[error("structure constant is not a polynomial; leftover denominator {denominator}")]
    NonPolynomial { denominator: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
