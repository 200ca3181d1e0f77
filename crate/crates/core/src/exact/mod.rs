//! Exact scalars and polynomials.

mod mpoly;
mod rat;

pub use mpoly::{assign, mpoly_is_coeff_nonneg, mpoly_substitute, poly, MPoly};
pub use rat::{q, Rat};
