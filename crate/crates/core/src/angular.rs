//! Finite angular-momentum matrices and the floor `<L^2> >= l(l+1)` on
//! `|l, m>` eigenstates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::BoundConstraint;
use crate::error::{Error, Result};
use crate::moments::{Moment, MomentState};

pub const MAX_L: u32 = 25;
/// Absolute tolerance for matrix identities and equality detection.
pub const EXACT_TOL: f64 = 1e-12;

/// `Lx, Ly, Lz` on the `2l + 1` states `|l, l>, |l, l-1>, ..., |l, -l>`,
/// units of hbar.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularRep {
    pub l: u32,
    pub lx: DMatrix<Complex64>,
    pub ly: DMatrix<Complex64>,
    pub lz: DMatrix<Complex64>,
}

pub fn build_rep(l: u32) -> Result<AngularRep> {
    if l > MAX_L {
        return Err(Error::Domain(format!("l must be at most {MAX_L}, got {l}")));
    }
    let dim = (2 * l + 1) as usize;
    let lf = f64::from(l);
    let m_of = |i: usize| lf - i as f64;
    // <m+1| L+ |m> = sqrt(l(l+1) - m(m+1)); row i-1 holds m+1 when column i holds m
    let mut raise = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 1..dim {
        let m = m_of(i);
        raise[(i - 1, i)] = Complex64::new((lf * (lf + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let lx = (&raise + &lower) * Complex64::new(0.5, 0.0);
    let ly = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let lz = DMatrix::from_diagonal(&DVector::from_fn(dim, |i, _| Complex64::new(m_of(i), 0.0)));
    Ok(AngularRep { l, lx, ly, lz })
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl AngularRep {
    pub fn dim(&self) -> usize {
        (2 * self.l + 1) as usize
    }

    /// Largest entry of `[Lx, Ly] - i Lz` and its cyclic permutations.
    pub fn commutator_residual(&self) -> f64 {
        let i = Complex64::new(0.0, 1.0);
        let comm = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b - b * a;
        [
            comm(&self.lx, &self.ly) - &self.lz * i,
            comm(&self.ly, &self.lz) - &self.lx * i,
            comm(&self.lz, &self.lx) - &self.ly * i,
        ]
        .iter()
        .map(max_abs)
        .fold(0.0, f64::max)
    }

    pub fn casimir(&self) -> DMatrix<Complex64> {
        &self.lx * &self.lx + &self.ly * &self.ly + &self.lz * &self.lz
    }

    /// Largest entry of `L^2 - l(l+1) I`.
    pub fn casimir_residual(&self) -> f64 {
        let lf = f64::from(self.l);
        let target = DMatrix::<Complex64>::identity(self.dim(), self.dim())
            * Complex64::new(lf * (lf + 1.0), 0.0);
        max_abs(&(self.casimir() - target))
    }

    /// Largest entry of `A - A^dagger` over the three components.
    pub fn hermiticity_residual(&self) -> f64 {
        [&self.lx, &self.ly, &self.lz]
            .iter()
            .map(|a| max_abs(&(*a - a.adjoint())))
            .fold(0.0, f64::max)
    }

    fn basis_state(&self, m: i32) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[(self.l as i32 - m) as usize] = Complex64::new(1.0, 0.0);
        v
    }

    /// `<l, m| op |l, m>`, real part.
    fn expect(&self, op: &DMatrix<Complex64>, m: i32) -> f64 {
        let v = self.basis_state(m);
        (v.adjoint() * op * &v)[(0, 0)].re
    }

    /// Moments `<Lx^2>, <Ly^2>, <Lz>, <L^2>` in `|l, m>`.
    pub fn moments(&self, m: i32) -> Result<MomentState> {
        if m.unsigned_abs() > self.l {
            return Err(Error::Domain(format!("|m| = {} exceeds l = {}", m.abs(), self.l)));
        }
        Ok(MomentState::new()
            .with(Moment::Lx2, self.expect(&(&self.lx * &self.lx), m))
            .with(Moment::Ly2, self.expect(&(&self.ly * &self.ly), m))
            .with(Moment::Lz, self.expect(&self.lz, m))
            .with(Moment::L2, self.expect(&self.casimir(), m)))
    }
}

/// Both sides of `<Lx^2><Ly^2> >= <Lz>^2/4` and `<L^2>` in one eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularFloor {
    pub l: u32,
    pub m: i32,
    pub lx2: f64,
    pub ly2: f64,
    pub product: f64,
    pub bound: f64,
    pub gap: f64,
    pub l2: f64,
    /// `l(l+1)`
    pub casimir: f64,
    /// Equality within [`EXACT_TOL`].
    pub saturated: bool,
}

pub fn moment_floor(l: u32, m: i32) -> Result<AngularFloor> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    floor_in(&build_rep(l)?, m)
}

fn floor_in(rep: &AngularRep, m: i32) -> Result<AngularFloor> {
    let moments = rep.moments(m)?;
    let constraint = BoundConstraint::Angular;
    let product = constraint.lhs(&moments)?;
    let bound = constraint.rhs(&moments)?;
    let gap = product - bound;
    if gap < -EXACT_TOL {
        return Err(Error::BoundViolated { lhs: product, rhs: bound });
    }
    let lf = f64::from(rep.l);
    Ok(AngularFloor {
        l: rep.l,
        m,
        lx2: moments.get(Moment::Lx2)?,
        ly2: moments.get(Moment::Ly2)?,
        product,
        bound,
        gap,
        l2: moments.get(Moment::L2)?,
        casimir: lf * (lf + 1.0),
        saturated: gap.abs() < EXACT_TOL,
    })
}

/// Every `(l, m)` with `l <= lmax`, in order of `l` then descending `m`.
pub fn floor_table(lmax: u32) -> Result<Vec<AngularFloor>> {
    let mut rows = Vec::new();
    for l in 0..=lmax {
        let rep = build_rep(l)?;
        let li = l as i32;
        for m in (-li..=li).rev() {
            rows.push(floor_in(&rep, m)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_representation() {
        let rep = build_rep(0).unwrap();
        assert_eq!(rep.dim(), 1);
        assert_eq!(rep.lx[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(rep.ly[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(rep.lz[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn l_one_lz() {
        let rep = build_rep(1).unwrap();
        let diag: Vec<f64> = (0..3).map(|i| rep.lz[(i, i)].re).collect();
        assert_eq!(diag, [1.0, 0.0, -1.0]);
    }

    #[test]
    fn l_two_casimir() {
        assert!(build_rep(2).unwrap().casimir_residual() < EXACT_TOL);
    }

    #[test]
    fn out_of_range() {
        assert!(build_rep(26).is_err());
        assert!(moment_floor(2, 3).is_err());
        assert!(moment_floor(2, -3).is_err());
    }

    #[test]
    fn floors() {
        let f = moment_floor(1, 1).unwrap();
        assert!((f.lx2 - 0.5).abs() < EXACT_TOL && (f.ly2 - 0.5).abs() < EXACT_TOL);
        assert!((f.product - 0.25).abs() < EXACT_TOL);
        assert!(f.saturated);
        assert!((f.l2 - 2.0).abs() < EXACT_TOL);

        // (l(l+1) - m^2) / 2
        let f = moment_floor(2, 1).unwrap();
        assert!((f.lx2 - 2.5).abs() < EXACT_TOL);
        assert!((f.product - 6.25).abs() < EXACT_TOL);
        assert!((f.bound - 0.25).abs() < EXACT_TOL);
        assert!(!f.saturated);

        let f = moment_floor(3, 0).unwrap();
        assert_eq!(f.bound, 0.0);
        assert!(f.product >= 0.0);
    }

    #[test]
    fn table_size() {
        assert_eq!(floor_table(3).unwrap().len(), 16);
    }
}
