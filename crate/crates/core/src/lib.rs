//! Tangent cones of Gorenstein non-complete-intersection monomial curves in
//! affine 4-space.

pub mod caselaw;
pub mod error;
pub mod morasb;
pub mod pipeline;
pub mod poly;
pub mod semigroup;
pub mod tcone;
pub mod toricgen;

pub use error::{Error, Result};
