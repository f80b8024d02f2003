//! Exact scalars: rationals, real quadratic surds, and polynomial-ring
//! coefficients.

mod coeff;
mod quad;
mod rat;
pub mod upoly;

pub use coeff::{Coeff, Extension};
pub use quad::{MinPoly, QuadReal};
pub use rat::{ParseRatError, Rat};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("quadratic surds from different fields: sqrt({0}) and sqrt({1})")]
    MixedField(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("nested towers rejected: coefficients from extensions `{0}` and `{1}`")]
    NestedExtension(String, String),
    #[error("extension modulus must have degree at least 2 and be irreducible")]
    BadModulus,
}
