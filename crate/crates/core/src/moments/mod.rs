//! Wave functions on a line or a radial half-line, and the expectation values
//! (moments) every bound and energy in this crate is written in terms of.

mod divergence;
mod function;
mod state;

pub use divergence::{divergence_identity_check, divergence_residual, DEFAULT_STEP};
pub use function::{Component, Dimension, RadialFunction, SampledGrid};
pub use state::{Moment, MomentState};

use crate::error::Result;

/// Returns `psi` scaled to unit norm under its dimension's measure.
pub fn normalize(psi: &RadialFunction) -> Result<RadialFunction> {
    psi.normalize()
}

/// `int |psi|^2 r^k dmu`.
pub fn expect_r_pow(psi: &RadialFunction, k: i32) -> Result<f64> {
    psi.expect_r_pow(k)
}

/// `int |grad psi|^2 dmu`, equal to `<p^2>` for decaying states.
pub fn expect_p2(psi: &RadialFunction) -> Result<f64> {
    psi.expect_p2()
}
