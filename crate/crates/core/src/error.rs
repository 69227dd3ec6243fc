use thiserror::Error;

use crate::moments::{Dimension, Moment};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment `{0}` is required but was not provided")]
    MissingMoment(Moment),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: Dimension, found: Dimension },

    /// A numerical result could not be certified to the requested accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// The minimum of a line search sits at (or next to) an end of its range.
    #[error("minimum at range boundary: y = {y} on [{lo}, {hi}]")]
    RangeBoundary { y: f64, lo: f64, hi: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("bound violated: {lhs} < {rhs}")]
    BoundViolated { lhs: f64, rhs: f64 },
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and > 0, got {value}")))
    }
}
