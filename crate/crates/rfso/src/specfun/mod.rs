//! Special functions needed by the closed-form analysis layer.
//!
//! Everything here is real/complex double precision, hand-rolled because the
//! combination required (complex log-gamma on a vertical contour, upper
//! incomplete gamma at negative non-integer order, Meijer-G evaluation by
//! residue summation with a Mellin-Barnes fallback) is not covered by a
//! single maintained crate. Each routine documents its accuracy and is tested
//! against high-precision reference values.

pub mod bessel;
pub mod erf;
pub mod gamma;
pub mod meijer;

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_j0};
pub use erf::{erf, erfc};
pub use gamma::{
    binomial, digamma, exp_integral_e1, exp_integral_e1_scaled, gamma, ln_gamma, ln_gamma_sign,
    upper_incomplete, upper_incomplete_scaled,
};
pub use meijer::{LeadingTerm, MeijerEvaluator};
