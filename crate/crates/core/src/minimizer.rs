//! Minimization of `<H>` on the equality boundary of an uncertainty relation.
//!
//! Every system here has an energy linear in two moments, `E = a x + b y`,
//! and a bound of the form `x >= f(y)`. The minimum sits on `x = f(y)`, so the
//! problem collapses to a one-dimensional search over `y`. Each system is
//! solved both from its closed form and by a golden-section search over the
//! boundary, so the two can be compared.

use serde::{Deserialize, Serialize};

use crate::bounds::{saturation_alpha, BoundConstraint, SaturationCoefficient};
use crate::error::{ensure_positive, Error, Result};
use crate::moments::{Moment, MomentState};
use crate::saturating;
use crate::units::ATOMIC;

/// Helium moment ratio `C = <r12^-1> / <r^-1>` for separable exponentials.
pub const DEFAULT_HELIUM_RATIO: f64 = 5.0 / 8.0;

/// Best variational helium energy used for comparison, hartree (four digits).
pub const HELIUM_REFERENCE: f64 = -2.904;

/// The boundary `x = f(y)` of a bound `x >= f(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Boundary {
    /// `x = c / y`
    Reciprocal { c: f64 },
    /// `x = c y^2`
    Quadratic { c: f64 },
    /// `x = c y`
    Linear { c: f64 },
}

impl Boundary {
    pub fn value(&self, y: f64) -> f64 {
        match *self {
            Boundary::Reciprocal { c } => c / y,
            Boundary::Quadratic { c } => c * y * y,
            Boundary::Linear { c } => c * y,
        }
    }

    pub fn slope(&self, y: f64) -> f64 {
        match *self {
            Boundary::Reciprocal { c } => -c / (y * y),
            Boundary::Quadratic { c } => 2.0 * c * y,
            Boundary::Linear { c } => c,
        }
    }

    pub fn curvature(&self, y: f64) -> f64 {
        match *self {
            Boundary::Reciprocal { c } => 2.0 * c / (y * y * y),
            Boundary::Quadratic { c } => 2.0 * c,
            Boundary::Linear { .. } => 0.0,
        }
    }
}

/// `E = kinetic * x + potential * y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearEnergy {
    pub kinetic: f64,
    pub potential: f64,
}

impl LinearEnergy {
    pub fn on_boundary(&self, boundary: &Boundary, y: f64) -> f64 {
        self.kinetic * boundary.value(y) + self.potential * y
    }

    fn slope_on_boundary(&self, boundary: &Boundary, y: f64) -> f64 {
        self.kinetic * boundary.slope(y) + self.potential
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryMinimum {
    pub y: f64,
    pub x: f64,
    pub energy: f64,
    pub iterations: usize,
}

const GOLDEN_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 500;
const STATIONARITY_TOL: f64 = 1e-8;

/// Minimizes `g(y) = a f(y) + b y` over `range`.
///
/// A golden-section search brackets the minimum until the bracket is narrower
/// than `1e-12` (or stops shrinking). Comparing function values cannot place
/// the argmin closer than about `sqrt(eps)` relative, so the midpoint is then
/// polished with Newton steps on `g'` using the boundary's own derivatives.
/// Central differences of `g` confirm stationarity at the returned point.
pub fn minimize_on_boundary(
    energy: LinearEnergy,
    boundary: &Boundary,
    range: (f64, f64),
) -> Result<BoundaryMinimum> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!("invalid search range [{lo}, {hi}]")));
    }
    ensure_positive("kinetic coefficient", energy.kinetic)?;
    let g = |y: f64| -> Result<f64> {
        let v = energy.on_boundary(boundary, y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("energy is not finite at y = {y}")))
        }
    };
    g(lo)?;
    g(hi)?;

    let (a, b, iterations) = golden_section(g, lo, hi)?;
    if a == lo || b == hi {
        return Err(Error::RangeBoundary {
            y: 0.5 * (a + b),
            lo,
            hi,
        });
    }

    let bracketed = 0.5 * (a + b);
    let y = polish(energy, boundary, bracketed, (lo, hi)).unwrap_or(bracketed);

    let step = 1e-5 * y.abs().max(1e-3);
    let slope = (g(y + step)? - g(y - step)?) / (2.0 * step);
    if slope.abs() > STATIONARITY_TOL * energy.potential.abs().max(1.0) {
        return Err(Error::Accuracy(format!(
            "boundary minimum at y = {y} is not stationary (g' = {slope:e})"
        )));
    }
    Ok(BoundaryMinimum {
        y,
        x: boundary.value(y),
        energy: g(y)?,
        iterations,
    })
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
/// Returns the final bracket and the number of iterations taken; the bracket
/// still touches `lo` or `hi` when the minimum is at an end.
pub fn golden_section<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64) -> Result<(f64, f64, usize)> {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut iterations = 0;
    while b - a > GOLDEN_TOL && iterations < MAX_ITERATIONS {
        let width = b - a;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
        if b - a >= width {
            break;
        }
    }
    Ok((a, b, iterations))
}

fn polish(energy: LinearEnergy, boundary: &Boundary, start: f64, range: (f64, f64)) -> Option<f64> {
    let mut y = start;
    for _ in 0..8 {
        let curvature = energy.kinetic * boundary.curvature(y);
        if !(curvature > 0.0) {
            return None;
        }
        let step = energy.slope_on_boundary(boundary, y) / curvature;
        y -= step;
        if !y.is_finite() || y <= range.0 || y >= range.1 {
            return None;
        }
        if step.abs() <= 1e-15 * y.abs() {
            break;
        }
    }
    ((y - start).abs() <= 1e-6 * start.abs().max(1.0)).then_some(y)
}

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Numeric,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// Parameters of one physical system, atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "snake_case")]
pub enum SystemSpec {
    /// `H = p^2 / 2m + k r^2 / 2` in 1 or 3 dimensions.
    Oscillator { m: f64, k: f64, dim: u32 },
    /// `H = p^2 / 2 - Z / r`, lowest state with angular momentum `l`.
    Hydrogenic { z: f64, l: u32 },
    /// Two electrons around `Z = 2` with `<r12^-1> = C <r^-1>`.
    Helium { c: f64 },
}

impl SystemSpec {
    pub fn oscillator(m: f64, k: f64, dim: u32) -> Result<Self> {
        let s = SystemSpec::Oscillator { m, k, dim };
        s.validate()?;
        Ok(s)
    }

    pub fn hydrogenic(z: f64, l: u32) -> Result<Self> {
        let s = SystemSpec::Hydrogenic { z, l };
        s.validate()?;
        Ok(s)
    }

    pub fn helium(c: f64) -> Result<Self> {
        let s = SystemSpec::Helium { c };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SystemSpec::Oscillator { m, k, dim } => {
                ensure_positive("m", m)?;
                ensure_positive("k", k)?;
                if dim != 1 && dim != 3 {
                    return Err(Error::Domain(format!("dim must be 1 or 3, got {dim}")));
                }
                Ok(())
            }
            SystemSpec::Hydrogenic { z, .. } => ensure_positive("Z", z),
            SystemSpec::Helium { c } => {
                if c.is_finite() && (0.0..4.0).contains(&c) {
                    Ok(())
                } else {
                    Err(Error::Domain(format!(
                        "C must satisfy 0 <= C < 4 for a bound minimum, got {c}"
                    )))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemSpec::Oscillator { dim: 1, .. } => "oscillator1d",
            SystemSpec::Oscillator { .. } => "oscillator3d",
            SystemSpec::Hydrogenic { .. } => "hydrogenic",
            SystemSpec::Helium { .. } => "helium",
        }
    }

    /// The bound the minimum saturates.
    pub fn active_constraint(&self) -> BoundConstraint {
        match *self {
            SystemSpec::Oscillator { dim: 1, .. } => BoundConstraint::Kennard1d,
            SystemSpec::Oscillator { .. } => BoundConstraint::Radial { n: 0 },
            SystemSpec::Hydrogenic { l: 0, .. } => BoundConstraint::Radial { n: 1 },
            SystemSpec::Hydrogenic { l, .. } => BoundConstraint::Orbital { l },
            SystemSpec::Helium { .. } => BoundConstraint::Radial { n: 1 },
        }
    }

    /// `(a, b)` of `E = a x + b y`; for helium `x` and `y` are per electron.
    pub fn energy_form(&self) -> LinearEnergy {
        match *self {
            SystemSpec::Oscillator { m, k, .. } => LinearEnergy {
                kinetic: 0.5 / m,
                potential: 0.5 * k,
            },
            SystemSpec::Hydrogenic { z, .. } => LinearEnergy {
                kinetic: 0.5,
                potential: -z,
            },
            SystemSpec::Helium { c } => LinearEnergy {
                kinetic: 1.0,
                potential: -(4.0 - c),
            },
        }
    }

    pub fn default_range(&self) -> (f64, f64) {
        match *self {
            SystemSpec::Oscillator { m, k, .. } => {
                let guess = (k * m).powf(-0.5);
                (1e-3 * guess, 1e3 * guess)
            }
            SystemSpec::Hydrogenic { z, .. } => (1e-3, 10.0 * z.max(4.0)),
            SystemSpec::Helium { .. } => (1e-3, 40.0),
        }
    }

    /// `<i[A, B] / 2>` for the operator pair behind the active bound.
    fn half_commutator(&self, y: f64) -> f64 {
        match *self {
            SystemSpec::Oscillator { dim, .. } => 0.5 * dim as f64,
            SystemSpec::Hydrogenic { l, .. } => (1 + l) as f64 * y,
            SystemSpec::Helium { .. } => y,
        }
    }

    fn moments_at(&self, x: f64, y: f64) -> MomentState {
        match *self {
            SystemSpec::Oscillator { .. } => MomentState::new().with(Moment::P2, x).with(Moment::R2, y),
            SystemSpec::Hydrogenic { .. } => {
                MomentState::new().with(Moment::P2, x).with(Moment::RInv, y)
            }
            SystemSpec::Helium { c } => MomentState::new()
                .with(Moment::P2, x)
                .with(Moment::RInv, y)
                .with(Moment::R12Inv, c * y),
        }
    }

    /// Closed-form `(x*, y*, E_min)`.
    fn analytic(&self) -> (f64, f64, f64) {
        match *self {
            SystemSpec::Oscillator { m, k, dim } => {
                let half = 0.5 * dim as f64;
                let km = (k * m).sqrt();
                (half * km, half / km, half * (k / m).sqrt())
            }
            SystemSpec::Hydrogenic { z, l } => {
                let n2 = ((1 + l) * (1 + l)) as f64;
                let y = z / n2;
                (z * z / n2, y, -0.5 * z * z / n2)
            }
            SystemSpec::Helium { c } => {
                let y = 0.5 * (4.0 - c);
                (y * y, y, -0.25 * (4.0 - c) * (4.0 - c))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub system: SystemSpec,
    /// Hartree, or `hbar omega`-scaled atomic units for oscillators.
    pub e_min: f64,
    pub x_star: f64,
    pub y_star: f64,
    pub minimizer: MomentState,
    pub alpha: SaturationCoefficient,
    pub method: Method,
}

impl SolveResult {
    pub fn e_min_ev(&self) -> f64 {
        ATOMIC.to_ev(self.e_min)
    }

    /// Oscillator energy in units of `hbar sqrt(k/m)`.
    pub fn e_min_natural(&self) -> Option<f64> {
        match self.system {
            SystemSpec::Oscillator { m, k, .. } => Some(self.e_min / (k / m).sqrt()),
            _ => None,
        }
    }

    /// `E_min - (-2.904)` for helium.
    pub fn reference_delta(&self) -> Option<f64> {
        matches!(self.system, SystemSpec::Helium { .. }).then(|| self.e_min - HELIUM_REFERENCE)
    }

    /// Gap of the active constraint at the minimizer.
    pub fn boundary_gap(&self) -> Result<f64> {
        self.system.active_constraint().gap(&self.minimizer)
    }
}

pub fn solve(system: &SystemSpec, method: Method) -> Result<SolveResult> {
    system.validate()?;
    let (x, y, e_min) = match method {
        Method::Analytic => system.analytic(),
        Method::Numeric => {
            let boundary = system
                .active_constraint()
                .boundary()
                .expect("every system's active constraint has an x = f(y) boundary");
            let min = minimize_on_boundary(system.energy_form(), &boundary, system.default_range())?;
            (min.x, min.y, min.energy)
        }
        Method::Quadrature => return saturating::quadrature_solve(system),
        Method::MonteCarlo => {
            return Err(Error::Domain(
                "Monte Carlo solves are only available for helium moments".into(),
            ))
        }
    };
    Ok(SolveResult {
        system: *system,
        e_min,
        x_star: x,
        y_star: y,
        minimizer: system.moments_at(x, y),
        alpha: saturation_alpha(x, system.half_commutator(y))?,
        method,
    })
}

pub fn solve_oscillator(m: f64, k: f64, dim: u32, method: Method) -> Result<SolveResult> {
    solve(&SystemSpec::oscillator(m, k, dim)?, method)
}

pub fn solve_hydrogenic(z: f64, l: u32, method: Method) -> Result<SolveResult> {
    solve(&SystemSpec::hydrogenic(z, l)?, method)
}

pub fn solve_helium(c: f64, method: Method) -> Result<SolveResult> {
    solve(&SystemSpec::helium(c)?, method)
}
