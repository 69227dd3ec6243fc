//! Energies of model quantum systems found by minimizing `<H>` on the
//! equality boundary of an uncertainty relation, with every result checked
//! again by quadrature over the wave function that saturates the bound.

pub mod angular;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod helium;
pub mod minimizer;
pub mod moments;
pub mod quadrature;
pub mod saturating;
pub mod seeding;
pub mod units;

pub use error::{Error, Result};
pub use moments::{Component, Dimension, Moment, MomentState, RadialFunction};
