//! Dynamics of polynomial maps on the valuative tree.

mod classify;
mod degree;
mod eigen;
mod push;
mod recurrence;
mod toric;
mod witness;

pub use classify::{classify, classify_with_seed, is_skew_form, Branch, Classification, CLASSIFY_BUDGET, CLASSIFY_MAX_ORDER, CLASSIFY_TERMS};
pub use degree::{degree_prefix, degree_sequence, degree_sequence_bruteforce, DegreeReport, OrbitBudget, BRUTEFORCE_LIMIT};
pub use eigen::{eigenvaluation, EigenKind, EigenReport, DEFAULT_MAX_ITER};
pub use push::{d_of, jacobian_formula_check, pushforward, JacobianCheck};
pub use recurrence::{detect_recurrence, Recurrence};
pub use toric::{extends_to_weighted_p2, fixed_monomial_set, tf_segment, TfSegment};
pub use witness::non_properness_witness;

use thiserror::Error;

use crate::poly::PolyError;
use crate::valtree::ValError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error(transparent)]
    Val(#[from] ValError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("degree {0} is not a positive integer")]
    NonIntegralDegree(String),
    #[error("composition too large: about {0} monomials")]
    TooLarge(u128),
    #[error("no integer recurrence of order at most {0}")]
    NoRecurrenceFound(usize),
    #[error("sequence of length {len} too short for order {max_order}")]
    SequenceTooShort { len: usize, max_order: usize },
    #[error("monomial valuation nu(x) = -{0}/{1}, nu(y) = -1 is not fixed by the map")]
    NotAnEigenvaluation(u64, u64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid weights: {0}")]
    BadWeights(String),
}
