use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::function::{Dimension, RadialFunction};
use crate::error::{Error, Result};

/// Labels for the expectation values a [`MomentState`] can hold.
///
/// On a line `P2` and `R2` read as `<p_x^2>` and `<x^2>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Moment {
    P2,
    R2,
    RInv,
    RInv2,
    R12Inv,
    Lx2,
    Ly2,
    Lz,
    L2,
}

impl Moment {
    pub fn label(self) -> &'static str {
        match self {
            Moment::P2 => "p2",
            Moment::R2 => "r2",
            Moment::RInv => "r_inv",
            Moment::RInv2 => "r_inv2",
            Moment::R12Inv => "r12_inv",
            Moment::Lx2 => "lx2",
            Moment::Ly2 => "ly2",
            Moment::Lz => "lz",
            Moment::L2 => "l2",
        }
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A named bag of expectation values in atomic units.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MomentState(BTreeMap<Moment, f64>);

impl MomentState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, moment: Moment, value: f64) -> Self {
        self.0.insert(moment, value);
        self
    }

    pub fn insert(&mut self, moment: Moment, value: f64) {
        self.0.insert(moment, value);
    }

    pub fn get(&self, moment: Moment) -> Result<f64> {
        self.0
            .get(&moment)
            .copied()
            .ok_or(Error::MissingMoment(moment))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Moment, f64)> + '_ {
        self.0.iter().map(|(&m, &v)| (m, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Measures the moments that converge for `psi`: `p2, r2` on a line, and
    /// additionally `r_inv, r_inv2` on the radial half-line.
    pub fn measure(psi: &RadialFunction) -> Result<Self> {
        let mut state = Self::new()
            .with(Moment::P2, psi.expect_p2()?)
            .with(Moment::R2, psi.expect_r_pow(2)?);
        if psi.dimension() == Dimension::Radial {
            state.insert(Moment::RInv, psi.expect_r_pow(-1)?);
            state.insert(Moment::RInv2, psi.expect_r_pow(-2)?);
        }
        Ok(state)
    }
}

impl FromIterator<(Moment, f64)> for MomentState {
    fn from_iter<I: IntoIterator<Item = (Moment, f64)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}
