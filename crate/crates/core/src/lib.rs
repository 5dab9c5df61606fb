//! Numerical toolkit for polarizer transmission models.
//!
//! * [`model`]: axis angles, the Malus law and the single-polarizer
//!   transmission distributions `p1`.
//! * [`quadrature`] and [`convolution`]: the hidden-variable prediction
//!   `M(α) = ∫ p1(λ) p1(α − λ) dλ` and its deviation from the Malus law.
//! * [`simplex`] and [`fitting`]: Nelder-Mead fits of `p1` so that the
//!   convolution reproduces the Malus law.
//! * [`bell`]: the CHSH Bell operator and its maximal expectation under
//!   classical, tensor-product and unconstrained commutation structures.
//! * [`cascade`]: three-polarizer transmission and the minimizing third angle.
//! * [`cli`]: the `malus-hv` command line (curve, fit, bell, cascade).
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod cascade;
pub mod cli;
pub mod convolution;
mod error;
pub mod fitting;
pub mod model;
pub mod quadrature;
pub mod simplex;

pub use error::{Error, Result};
pub use model::{
    malus, p1_belinfante, p1_eval, wrap_axis, Angle, FlexibleP1, P1Params, PolarizerSpec, P1,
};
