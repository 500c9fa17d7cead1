//! Exact arithmetic: rationals, rational functions in `z`, algebraic
//! extensions, multivariate polynomials in `S`, `T`, `z` and factorization.

pub mod extension;
pub mod factor;
pub mod field;
pub mod multipoly;
pub mod ratfunc;
pub mod roots;
pub mod upoly;

use thiserror::Error;

pub use extension::{AlgField, BaseField};
pub use field::{ComplexField, Field, QField};
pub use multipoly::{MultiPoly, Var};
pub use ratfunc::{QPoly, RatFunc, RatFuncField};
pub use roots::{univariate_roots, RootHandle};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a series with no nonzero term")]
    DivisionByZeroSeries,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("degree {degree} in {var} is too small (need at least {needed})")]
    DegreeTooSmall { var: String, degree: usize, needed: usize },
    #[error("unsupported field extension by {minpoly}: {reason}")]
    UnsupportedExtension { minpoly: String, reason: String },
    #[error("truncation too small: need order {needed}, have {available}")]
    TruncationTooSmall { needed: String, available: String },
    #[error("leading term of the local equation vanishes")]
    LeadingTermVanishes,
    #[error("bad base point z1 = {z1}: {reason}")]
    BadBasePoint { z1: String, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl AlgebraError {
    pub fn unsupported(minpoly: impl Into<String>, reason: impl Into<String>) -> Self {
        AlgebraError::UnsupportedExtension { minpoly: minpoly.into(), reason: reason.into() }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            AlgebraError::DivisionByZero => "division-by-zero",
            AlgebraError::DivisionByZeroSeries => "division-by-zero-series",
            AlgebraError::ZeroPolynomial => "zero-polynomial",
            AlgebraError::DegreeTooSmall { .. } => "degree-too-small",
            AlgebraError::UnsupportedExtension { .. } => "unsupported-extension",
            AlgebraError::TruncationTooSmall { .. } => "truncation-too-small",
            AlgebraError::LeadingTermVanishes => "leading-term-vanishes",
            AlgebraError::BadBasePoint { .. } => "bad-base-point",
            AlgebraError::InvalidArgument(_) => "invalid-argument",
        }
    }
}
