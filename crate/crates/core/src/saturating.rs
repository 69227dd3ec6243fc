//! Wave functions that saturate a bound, obtained from `(alpha A + iB)|psi> = 0`.
//!
//! For the oscillator pair `(p_x, x)` and the hydrogenic pair `(p, r_vec/r)`
//! this is a first-order linear ODE `psi' = (B / alpha) psi`, integrated here
//! with classical RK4 and compared against the Gaussian and exponential it
//! should reproduce.

use serde::Serialize;

use crate::bounds::{saturation_alpha, SaturationCoefficient};
use crate::error::{ensure_positive, Error, Result};
use crate::minimizer::{self, Method, SolveResult, SystemSpec};
use crate::moments::{Dimension, Moment, MomentState, RadialFunction, SampledGrid};

/// Relative step-halving error estimate above which a grid is rejected.
pub const STEP_HALVING_TOL: f64 = 1e-6;
/// Points where the reference is below this fraction of its peak are ignored
/// in pointwise comparisons.
pub const SIGNIFICANT_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Oscillator1d { k: f64, m: f64 },
    Hydrogenic { z: f64 },
}

impl Family {
    pub fn oscillator(k: f64, m: f64) -> Result<Self> {
        ensure_positive("k", k)?;
        ensure_positive("m", m)?;
        Ok(Family::Oscillator1d { k, m })
    }

    pub fn hydrogenic(z: f64) -> Result<Self> {
        ensure_positive("Z", z)?;
        Ok(Family::Hydrogenic { z })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Oscillator1d { .. } => "oscillator1d",
            Family::Hydrogenic { .. } => "hydrogenic",
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            Family::Oscillator1d { .. } => Dimension::Line,
            Family::Hydrogenic { .. } => Dimension::Radial,
        }
    }

    /// `(k m)^(-1/4)` for the oscillator, `1/Z` for the atom.
    pub fn decay_length(&self) -> f64 {
        match *self {
            Family::Oscillator1d { k, m } => (k * m).powf(-0.25),
            Family::Hydrogenic { z } => 1.0 / z,
        }
    }

    fn system(&self) -> SystemSpec {
        match *self {
            Family::Oscillator1d { k, m } => SystemSpec::Oscillator { m, k, dim: 1 },
            Family::Hydrogenic { z } => SystemSpec::Hydrogenic { z, l: 0 },
        }
    }

    /// The `B` operator as a multiplicative factor: `x`, or `r_vec/r -> 1` on
    /// spherically symmetric states.
    fn coordinate_factor(&self, x: f64) -> f64 {
        match self {
            Family::Oscillator1d { .. } => x,
            Family::Hydrogenic { .. } => 1.0,
        }
    }

    fn default_grid(&self) -> Grid {
        let length = self.decay_length();
        match self {
            Family::Oscillator1d { .. } => Grid {
                step: 0.01 * length,
                extent: 8.0 * length,
            },
            Family::Hydrogenic { .. } => Grid {
                step: 0.005 * length,
                extent: 25.0 * length,
            },
        }
    }
}

/// Uniform grid: `[0, extent]` radially, `[-extent, extent]` on a line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub step: f64,
    pub extent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaturatingOde {
    pub family: Family,
    pub alpha: SaturationCoefficient,
    pub grid: Grid,
}

impl SaturatingOde {
    /// `c(x)` in `psi' = c(x) psi`.
    pub fn coefficient(&self, x: f64) -> f64 {
        self.family.coordinate_factor(x) / self.alpha.alpha
    }

    pub fn with_grid(mut self, step: f64, extent: f64) -> Result<Self> {
        ensure_positive("grid step", step)?;
        ensure_positive("grid extent", extent)?;
        if extent < 4.0 * step {
            return Err(Error::Domain(format!(
                "grid extent {extent} holds fewer than 4 steps of {step}"
            )));
        }
        self.grid = Grid { step, extent };
        Ok(self)
    }

    fn steps(&self) -> usize {
        (self.grid.extent / self.grid.step).round() as usize
    }

    fn march(&self, steps: usize) -> Vec<f64> {
        let h = self.grid.extent / steps as f64;
        let mut values = Vec::with_capacity(steps + 1);
        let mut psi = 1.0;
        values.push(psi);
        for i in 0..steps {
            let x = i as f64 * h;
            let k1 = self.coefficient(x) * psi;
            let k2 = self.coefficient(x + 0.5 * h) * (psi + 0.5 * h * k1);
            let k3 = self.coefficient(x + 0.5 * h) * (psi + 0.5 * h * k2);
            let k4 = self.coefficient(x + h) * (psi + h * k3);
            psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            values.push(psi);
        }
        values
    }
}

/// The saturating ODE of `family` with `alpha` from the family's boundary
/// minimum, on the default grid.
pub fn build_ode(family: Family) -> Result<SaturatingOde> {
    let solved = minimizer::solve(&family.system(), Method::Analytic)?;
    Ok(SaturatingOde {
        family,
        alpha: solved.alpha,
        grid: family.default_grid(),
    })
}

/// Parses a family name as used on the command line.
pub fn family_named(name: &str, k: f64, m: f64, z: f64) -> Result<Family> {
    match name {
        "oscillator" | "oscillator1d" => Family::oscillator(k, m),
        "hydrogen" | "hydrogenic" => Family::hydrogenic(z),
        other => Err(Error::Domain(format!("unknown saturating family `{other}`"))),
    }
}

/// Integrates the ODE outward from `psi(0) = 1` (mirrored to `x < 0` for the
/// oscillator) and normalizes the result. The same march at half the step
/// must agree to [`STEP_HALVING_TOL`] or the grid is rejected as too coarse.
pub fn integrate_ode(ode: &SaturatingOde) -> Result<RadialFunction> {
    let steps = ode.steps();
    let coarse = ode.march(steps);
    let fine = ode.march(2 * steps);
    let peak = coarse.iter().fold(0.0f64, |p, v| p.max(v.abs()));
    let estimate = coarse
        .iter()
        .zip(fine.iter().step_by(2))
        .filter(|(_, f)| f.abs() >= SIGNIFICANT_FRACTION * peak)
        .map(|(c, f)| ((c - f) / f).abs())
        .fold(0.0f64, f64::max);
    if !(estimate <= STEP_HALVING_TOL) {
        return Err(Error::Accuracy(format!(
            "grid step {} is too coarse: step-halving error estimate {estimate:.3e}",
            ode.grid.step
        )));
    }

    let h = ode.grid.extent / steps as f64;
    let (points, values) = match ode.family.dimension() {
        Dimension::Radial => ((0..=steps).map(|i| i as f64 * h).collect(), coarse),
        Dimension::Line => {
            let points = (0..=2 * steps)
                .map(|i| (i as f64 - steps as f64) * h)
                .collect();
            let values = coarse.iter().rev().chain(&coarse[1..]).copied().collect();
            (points, values)
        }
    };
    RadialFunction::sampled(SampledGrid::new(points, values)?, ode.family.dimension())?.normalize()
}

/// The normalized closed-form solution: `exp(-sqrt(km) x^2 / 2)` or `exp(-Z r)`.
pub fn closed_form(family: &Family) -> Result<RadialFunction> {
    match *family {
        Family::Oscillator1d { k, m } => {
            RadialFunction::gaussian(0.5 * (k * m).sqrt(), Dimension::Line)?.normalize()
        }
        Family::Hydrogenic { z } => RadialFunction::exponential(z, Dimension::Radial)?.normalize(),
    }
}

/// Largest `|sampled - reference| / |reference|` over the grid nodes of
/// `sampled` where the reference exceeds [`SIGNIFICANT_FRACTION`] of its peak.
pub fn max_relative_deviation(sampled: &RadialFunction, reference: &RadialFunction) -> Result<f64> {
    let grid = sampled
        .grid()
        .ok_or_else(|| Error::Domain("deviation is measured on a sampled function".into()))?;
    let peak = grid
        .points()
        .iter()
        .fold(0.0f64, |p, &x| p.max(reference.value(x).abs()));
    Ok(grid
        .points()
        .iter()
        .filter_map(|&x| {
            let r = reference.value(x);
            (r.abs() >= SIGNIFICANT_FRACTION * peak).then(|| ((sampled.value(x) - r) / r).abs())
        })
        .fold(0.0f64, f64::max))
}

/// `|(alpha A + iB) psi|^2 = int (B psi - alpha psi')^2 dmu`.
pub fn residual_check(psi: &RadialFunction, ode: &SaturatingOde) -> Result<f64> {
    let expected = ode.family.dimension();
    if psi.dimension() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: psi.dimension(),
        });
    }
    let alpha = ode.alpha.alpha;
    let b = |x: f64| ode.family.coordinate_factor(x);
    let scale = psi.integrate(|x, v, d| b(x) * b(x) * v * v + alpha * alpha * d * d)?;
    psi.integrate_with_floor(
        |x, v, d| {
            let t = b(x) * v - alpha * d;
            t * t
        },
        1e-16 * scale,
    )
}

/// `<H>` of a normalized state of `family`.
pub fn energy_expectation(family: &Family, psi: &RadialFunction) -> Result<f64> {
    match *family {
        Family::Oscillator1d { k, m } => {
            Ok(psi.expect_p2()? / (2.0 * m) + 0.5 * k * psi.expect_r_pow(2)?)
        }
        Family::Hydrogenic { z } => Ok(0.5 * psi.expect_p2()? - z * psi.expect_r_pow(-1)?),
    }
}

/// Solves `system` by integrating its saturating ODE and evaluating `<H>` and
/// the moments by quadrature over the result.
pub fn quadrature_solve(system: &SystemSpec) -> Result<SolveResult> {
    let family = match *system {
        SystemSpec::Oscillator { m, k, dim: 1 } => Family::oscillator(k, m)?,
        SystemSpec::Hydrogenic { z, l: 0 } => Family::hydrogenic(z)?,
        _ => {
            return Err(Error::Domain(format!(
                "no saturating ODE is available for {}",
                system.name()
            )))
        }
    };
    let psi = integrate_ode(&build_ode(family)?)?;
    let e_min = energy_expectation(&family, &psi)?;
    let x = psi.expect_p2()?;
    let (y, label, comm_half) = match family {
        Family::Oscillator1d { .. } => (psi.expect_r_pow(2)?, Moment::R2, 0.5),
        Family::Hydrogenic { .. } => {
            let y = psi.expect_r_pow(-1)?;
            (y, Moment::RInv, y)
        }
    };
    Ok(SolveResult {
        system: *system,
        e_min,
        x_star: x,
        y_star: y,
        minimizer: MomentState::new().with(Moment::P2, x).with(label, y),
        alpha: saturation_alpha(x, comm_half)?,
        method: Method::Quadrature,
    })
}
