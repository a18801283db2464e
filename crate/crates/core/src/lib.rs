//! Fractional calculus toolkit: Mittag-Leffler and Wright functions,
//! fractional Green's functions of linear constant-coefficient equations,
//! Laplace-transform solutions of initial-value problems, and independent
//! numerical oracles used to check those solutions by substitution.

// NaN must fail parameter checks, so comparisons are written negated. Matrix
// code indexes explicitly.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

mod dd;
mod gamma;
mod quad;
mod series;

pub mod diffusion;
pub mod error;
pub mod fracops;
pub mod greens;
pub mod ivp;
pub mod special_fn;
pub mod wright;

pub use error::{FracError, Result};
pub use series::SeriesControl;
