//! Valuative dynamics of polynomial maps of the affine plane.

pub mod numeric;
pub mod poly;
pub mod valtree;
pub mod blowup;
pub mod dynamics;
pub mod green;
