//! Both sides of the uncertainty relations, their gaps for concrete states,
//! and the saturation coefficient of the equality case.
//!
//! Every bound reads raw second moments `<A^2> <B^2> >= <i[A,B]/2>^2`; nothing
//! is centered. The radial family comes from `A = p`, `B = r_vec r^-n`, whose
//! half-commutator contracts to the divergence `(3 - n) r^-n / 2`.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minimizer::Boundary;
use crate::moments::{Component, Dimension, Moment, MomentState, RadialFunction};
use crate::seeding;

/// Slack allowed below zero on any gap of a physical state.
pub const GAP_SLACK: f64 = 1e-9;

/// One inequality `lhs >= rhs` between moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum BoundConstraint {
    /// `<p_x^2> <x^2> >= 1/4`.
    Kennard1d,
    /// `<p^2> <r^{2(1-n)}> >= ((3 - n)/2)^2 <r^-n>^2` for `n` in `0..=2`, in the
    /// reduced forms `<p^2><r^2> >= 9/4`, `<p^2> >= <r^-1>^2`,
    /// `<p^2> >= <r^-2>/4`.
    Radial { n: u8 },
    /// `<p^2> >= (1 + l)^2 <r^-1>^2`, the spin-orbit form for states with
    /// `sigma . L = l`.
    Orbital { l: u32 },
    /// `<Lx^2> <Ly^2> >= <Lz>^2 / 4`.
    Angular,
}

/// `((3 - n) / 2)^2`, the coefficient of the radial family.
pub fn radial_coefficient(n: u8) -> f64 {
    let h = 0.5 * (3.0 - f64::from(n));
    h * h
}

impl BoundConstraint {
    pub fn radial(n: u8) -> Result<Self> {
        if n <= 2 {
            Ok(BoundConstraint::Radial { n })
        } else {
            Err(Error::Domain(format!(
                "radial bound is provided for n in 0..=2, got {n}"
            )))
        }
    }

    pub fn id(&self) -> String {
        match self {
            BoundConstraint::Kennard1d => "kennard_1d".into(),
            BoundConstraint::Radial { n } => format!("radial_n{n}"),
            BoundConstraint::Orbital { l } => format!("orbital_l{l}"),
            BoundConstraint::Angular => "angular".into(),
        }
    }

    pub fn n(&self) -> Option<u8> {
        match self {
            BoundConstraint::Radial { n } => Some(*n),
            _ => None,
        }
    }

    /// Dimension of the spatial states the bound applies to.
    pub fn dimension(&self) -> Option<Dimension> {
        match self {
            BoundConstraint::Kennard1d => Some(Dimension::Line),
            BoundConstraint::Radial { .. } | BoundConstraint::Orbital { .. } => {
                Some(Dimension::Radial)
            }
            BoundConstraint::Angular => None,
        }
    }

    pub fn lhs(&self, m: &MomentState) -> Result<f64> {
        match *self {
            BoundConstraint::Kennard1d | BoundConstraint::Radial { n: 0 } => {
                Ok(m.get(Moment::P2)? * m.get(Moment::R2)?)
            }
            BoundConstraint::Radial { .. } | BoundConstraint::Orbital { .. } => m.get(Moment::P2),
            BoundConstraint::Angular => Ok(m.get(Moment::Lx2)? * m.get(Moment::Ly2)?),
        }
    }

    pub fn rhs(&self, m: &MomentState) -> Result<f64> {
        match *self {
            BoundConstraint::Kennard1d => Ok(0.25),
            BoundConstraint::Radial { n: 0 } => Ok(radial_coefficient(0)),
            BoundConstraint::Radial { n: 1 } => {
                let y = m.get(Moment::RInv)?;
                Ok(radial_coefficient(1) * y * y)
            }
            BoundConstraint::Radial { n } => Ok(radial_coefficient(n) * m.get(Moment::RInv2)?),
            BoundConstraint::Orbital { l } => {
                let y = m.get(Moment::RInv)?;
                let j = f64::from(1 + l);
                Ok(j * j * y * y)
            }
            BoundConstraint::Angular => {
                let lz = m.get(Moment::Lz)?;
                Ok(0.25 * lz * lz)
            }
        }
    }

    /// `lhs - rhs`.
    pub fn gap(&self, m: &MomentState) -> Result<f64> {
        Ok(self.lhs(m)? - self.rhs(m)?)
    }

    /// The equality boundary written as `x = f(y)`, with `x = <p^2>` and `y` the
    /// moment the bound is read against (`<r^2>`, `<r^-1>` or `<r^-2>`).
    pub fn boundary(&self) -> Option<Boundary> {
        match *self {
            BoundConstraint::Kennard1d => Some(Boundary::Reciprocal { c: 0.25 }),
            BoundConstraint::Radial { n: 0 } => Some(Boundary::Reciprocal {
                c: radial_coefficient(0),
            }),
            BoundConstraint::Radial { n: 1 } => Some(Boundary::Quadratic { c: 1.0 }),
            BoundConstraint::Radial { n } => Some(Boundary::Linear {
                c: radial_coefficient(n),
            }),
            BoundConstraint::Orbital { l } => Some(Boundary::Quadratic {
                c: f64::from((1 + l) * (1 + l)),
            }),
            BoundConstraint::Angular => None,
        }
    }
}

impl fmt::Display for BoundConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

pub fn bound_gap(constraint: &BoundConstraint, moments: &MomentState) -> Result<f64> {
    constraint.gap(moments)
}

/// One evaluated bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub id: String,
    pub n: Option<u8>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl BoundRow {
    pub fn holds(&self) -> bool {
        self.gap >= -GAP_SLACK
    }
}

fn row(constraint: &BoundConstraint, moments: &MomentState) -> Result<BoundRow> {
    let lhs = constraint.lhs(moments)?;
    let rhs = constraint.rhs(moments)?;
    Ok(BoundRow {
        id: constraint.id(),
        n: constraint.n(),
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

/// Evaluates one spatial bound on `psi` by quadrature.
pub fn evaluate_bound(constraint: &BoundConstraint, psi: &RadialFunction) -> Result<BoundRow> {
    let expected = constraint.dimension().ok_or_else(|| {
        Error::Domain(format!("{constraint} is not a bound on spatial states"))
    })?;
    if psi.dimension() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: psi.dimension(),
        });
    }
    row(constraint, &MomentState::measure(psi)?)
}

/// The bounds that apply to any state of `dimension`.
pub fn applicable_bounds(dimension: Dimension) -> Vec<BoundConstraint> {
    match dimension {
        Dimension::Line => vec![BoundConstraint::Kennard1d],
        Dimension::Radial => (0..=2).map(|n| BoundConstraint::Radial { n }).collect(),
    }
}

/// Evaluates every applicable bound on a normalized `psi`.
pub fn check_all_bounds(psi: &RadialFunction) -> Result<Vec<BoundRow>> {
    let moments = MomentState::measure(psi)?;
    applicable_bounds(psi.dimension())
        .iter()
        .map(|c| row(c, &moments))
        .collect()
}

/// `alpha = -<i[A,B]/2> / <A^2>`, the multiplier with `(alpha A + iB)|psi> = 0`
/// at the equality point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationCoefficient {
    pub alpha: f64,
}

pub fn saturation_alpha(a_sq: f64, comm_half: f64) -> Result<SaturationCoefficient> {
    if a_sq == 0.0 {
        return Err(Error::DivisionByZero("<A^2> = 0 in saturation coefficient"));
    }
    if !(a_sq > 0.0 && a_sq.is_finite() && comm_half.is_finite()) {
        return Err(Error::Domain(format!(
            "saturation needs <A^2> > 0 and finite inputs, got {a_sq}, {comm_half}"
        )));
    }
    Ok(SaturationCoefficient {
        alpha: -comm_half / a_sq,
    })
}

/// `| (alpha p_x + i x) psi |^2 = int (x psi - alpha psi')^2 dx` for a state on
/// a line.
pub fn oscillator_vector_length(psi: &RadialFunction, alpha: f64) -> Result<f64> {
    if psi.dimension() != Dimension::Line {
        return Err(Error::DimensionMismatch {
            expected: Dimension::Line,
            found: psi.dimension(),
        });
    }
    let scale = psi.integrate(|x, v, d| x * x * v * v + alpha * alpha * d * d)?;
    psi.integrate_with_floor(
        |x, v, d| {
            let t = x * v - alpha * d;
            t * t
        },
        1e-16 * scale,
    )
}

/// Draws trial `index` of the sweep seeded by `master`: a normalized mixture of
/// 2 to 5 terms `c exp(-b r)` or `c exp(-b r^2)`, `c ~ U[-1, 1]`, `b`
/// log-uniform in `[0.2, 5]`, on a line or the radial half-line with equal odds.
pub fn random_trial(master: u64, index: u64) -> Result<RadialFunction> {
    let mut rng = seeding::rng_for(master, index);
    let dimension = if rng.random_bool(0.5) {
        Dimension::Radial
    } else {
        Dimension::Line
    };
    let terms = rng.random_range(2..=5);
    let (ln_lo, ln_hi) = (0.2f64.ln(), 5f64.ln());
    let components = (0..terms)
        .map(|_| {
            let coeff = rng.random_range(-1.0..=1.0);
            let rate = rng.random_range(ln_lo..=ln_hi).exp();
            if rng.random_bool(0.5) {
                Component::Exponential { coeff, rate }
            } else {
                Component::Gaussian { coeff, rate }
            }
        })
        .collect();
    RadialFunction::mixture(components, dimension)?.normalize()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: u64,
    pub dimension: Dimension,
    pub rows: Vec<BoundRow>,
}

/// Runs `trials` seeded random states through [`check_all_bounds`]. Trials are
/// evaluated in parallel and returned in index order.
pub fn fuzz_bounds(trials: u64, seed: u64) -> Result<Vec<TrialReport>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let psi = random_trial(seed, trial)?;
            Ok(TrialReport {
                trial,
                dimension: psi.dimension(),
                rows: check_all_bounds(&psi)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hydrogenic(z: f64) -> RadialFunction {
        RadialFunction::exponential(z, Dimension::Radial)
            .unwrap()
            .normalize()
            .unwrap()
    }

    #[test]
    fn kennard_at_oscillator_ground_state() {
        let m = MomentState::new().with(Moment::P2, 0.5).with(Moment::R2, 0.5);
        assert_eq!(bound_gap(&BoundConstraint::Kennard1d, &m).unwrap(), 0.0);
    }

    #[test]
    fn radial_n1_at_hydrogenic_moments() {
        for z in [1.0, 2.0, 3.0] {
            let m = MomentState::new().with(Moment::P2, z * z).with(Moment::RInv, z);
            assert_eq!(bound_gap(&BoundConstraint::Radial { n: 1 }, &m).unwrap(), 0.0);
        }
    }

    #[test]
    fn missing_moment_is_a_contract_error() {
        let m = MomentState::new().with(Moment::P2, 1.0);
        assert_eq!(
            bound_gap(&BoundConstraint::Radial { n: 1 }, &m),
            Err(Error::MissingMoment(Moment::RInv))
        );
        assert!(BoundConstraint::radial(3).is_err());
    }

    #[test]
    fn all_radial_bounds_for_unit_exponential() {
        // <p^2> = 1, <r^2> = 3, <r^-1> = 1, <r^-2> = 2
        let rows = check_all_bounds(&hydrogenic(1.0)).unwrap();
        let ids: Vec<_> = rows.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["radial_n0", "radial_n1", "radial_n2"]);
        assert!((rows[0].gap - 0.75).abs() < 1e-12);
        assert!(rows[1].gap.abs() < 1e-12);
        assert!((rows[2].gap - 0.5).abs() < 1e-12);
    }

    #[test]
    fn only_n1_saturates_for_exponentials() {
        for z in [0.7, 1.0, 2.5] {
            let rows = check_all_bounds(&hydrogenic(z)).unwrap();
            for r in rows {
                if r.n == Some(1) {
                    assert!(r.gap.abs() < 1e-10);
                } else {
                    assert!(r.gap > 0.1);
                }
            }
        }
    }

    #[test]
    fn kennard_saturated_by_gaussians() {
        for km in [0.25f64, 1.0, 4.0] {
            let psi = RadialFunction::gaussian(0.5 * km.sqrt(), Dimension::Line)
                .unwrap()
                .normalize()
                .unwrap();
            let rows = check_all_bounds(&psi).unwrap();
            assert_eq!(rows.len(), 1);
            assert!(rows[0].gap.abs() < 1e-8);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let r = evaluate_bound(&BoundConstraint::Kennard1d, &hydrogenic(1.0));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        assert!(evaluate_bound(&BoundConstraint::Angular, &hydrogenic(1.0)).is_err());
    }

    #[test]
    fn alpha_values() {
        assert_eq!(saturation_alpha(0.5, 0.5).unwrap().alpha, -1.0);
        assert_eq!(saturation_alpha(4.0, 2.0).unwrap().alpha, -0.5);
        assert_eq!(saturation_alpha(3.0, 0.0).unwrap().alpha, 0.0);
        assert!(matches!(saturation_alpha(0.0, 1.0), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn vector_length_vanishes_only_at_saturation() {
        let ground = RadialFunction::gaussian(0.5, Dimension::Line)
            .unwrap()
            .normalize()
            .unwrap();
        let alpha = saturation_alpha(0.5, 0.5).unwrap().alpha;
        assert!(oscillator_vector_length(&ground, alpha).unwrap() < 1e-8);
        let wide = RadialFunction::gaussian(0.2, Dimension::Line)
            .unwrap()
            .normalize()
            .unwrap();
        assert!(oscillator_vector_length(&wide, alpha).unwrap() > 1e-3);
    }

    #[test]
    fn seeded_mixture_satisfies_everything() {
        let psi = random_trial(42, 0).unwrap();
        for r in check_all_bounds(&psi).unwrap() {
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn sweep_is_order_independent() {
        let all = fuzz_bounds(20, 5).unwrap();
        let single = fuzz_bounds(20, 5).unwrap();
        assert_eq!(all, single);
        let t7 = check_all_bounds(&random_trial(5, 7).unwrap()).unwrap();
        assert_eq!(all[7].rows, t7);
    }
}
