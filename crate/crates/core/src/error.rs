use thiserror::Error;

/// Errors raised by the bundle calculus.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("torus modulus must have positive imaginary part, got {re}{im:+}i")]
    InvalidModulus { re: f64, im: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("factors live on different tori")]
    TorusMismatch,

    #[error("matrix is not invertible in the Laurent ring (determinant is not a monomial)")]
    NotInvertibleInRing,

    #[error("determinant vanishes on a sampled point of |u| = 1")]
    SingularSample,

    #[error("determinant vanishes inside the working annulus (root of modulus {0:e})")]
    DetVanishesOnCstar(f64),

    #[error("matrix is not nilpotent after shifting by the eigenvalue (residual {0:e})")]
    NotNilpotent(f64),

    #[error("unexpected shape: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
