use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::quadrature;

/// Measure a wave function is integrated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    /// `dx` over the whole real line.
    Line,
    /// `r^2 dr` over `[0, inf)`; angular factors are absorbed into the norm.
    Radial,
}

impl Dimension {
    pub fn from_rank(dim: u32) -> Result<Self> {
        match dim {
            1 => Ok(Dimension::Line),
            3 => Ok(Dimension::Radial),
            other => Err(Error::Domain(format!("dimension must be 1 or 3, got {other}"))),
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            Dimension::Line => 1,
            Dimension::Radial => 3,
        }
    }

    fn weight(self, r: f64) -> f64 {
        match self {
            Dimension::Line => 1.0,
            Dimension::Radial => r * r,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Line => f.write_str("1D line"),
            Dimension::Radial => f.write_str("3D radial"),
        }
    }
}

/// One closed-form term of a mixture, a function of `r = |x|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    /// `coeff * exp(-rate * r)`.
    Exponential { coeff: f64, rate: f64 },
    /// `coeff * exp(-rate * r^2)`.
    Gaussian { coeff: f64, rate: f64 },
}

impl Component {
    fn value_and_slope(&self, r: f64) -> (f64, f64) {
        match *self {
            Component::Exponential { coeff, rate } => {
                let v = coeff * (-rate * r).exp();
                (v, -rate * v)
            }
            Component::Gaussian { coeff, rate } => {
                let v = coeff * (-rate * r * r).exp();
                (v, -2.0 * rate * r * v)
            }
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Component::Exponential { rate, .. } => 1.0 / rate,
            Component::Gaussian { rate, .. } => 1.0 / rate.sqrt(),
        }
    }

    fn rescaled(&self, lambda: f64) -> Self {
        match *self {
            Component::Exponential { coeff, rate } => Component::Exponential {
                coeff,
                rate: rate * lambda,
            },
            Component::Gaussian { coeff, rate } => Component::Gaussian {
                coeff,
                rate: rate * lambda * lambda,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let (Component::Exponential { coeff, rate } | Component::Gaussian { coeff, rate }) = *self;
        if !coeff.is_finite() {
            return Err(Error::Domain(format!("coefficient must be finite, got {coeff}")));
        }
        ensure_positive("decay rate", rate)
    }
}

/// Values of a wave function on an increasing grid, interpolated by local
/// four-point cubics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledGrid {
    points: Vec<f64>,
    values: Vec<f64>,
}

impl SampledGrid {
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Domain(format!(
                "grid has {} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if points.len() < 4 {
            return Err(Error::Domain("sampled grid needs at least 4 points".into()));
        }
        if points.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Domain("sampled grid contains non-finite entries".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("grid points must be strictly increasing".into()));
        }
        Ok(Self { points, values })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn cell_of(&self, x: f64) -> Option<usize> {
        let n = self.points.len();
        if x < self.points[0] || x > self.points[n - 1] {
            return None;
        }
        let i = self.points.partition_point(|&p| p <= x);
        Some(i.saturating_sub(1).min(n - 2))
    }

    /// Cubic through the four nodes surrounding cell `cell`, evaluated at `x`.
    fn eval_in_cell(&self, cell: usize, x: f64) -> (f64, f64) {
        let n = self.points.len();
        let start = cell.saturating_sub(1).min(n - 4);
        let xs = &self.points[start..start + 4];
        let ys = &self.values[start..start + 4];
        let mut value = 0.0;
        let mut slope = 0.0;
        for j in 0..4 {
            let mut basis = 1.0;
            let mut dbasis = 0.0;
            for m in 0..4 {
                if m == j {
                    continue;
                }
                let denom = xs[j] - xs[m];
                let factor = (x - xs[m]) / denom;
                dbasis = dbasis * factor + basis / denom;
                basis *= factor;
            }
            value += ys[j] * basis;
            slope += ys[j] * dbasis;
        }
        (value, slope)
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        match self.cell_of(x) {
            Some(cell) => self.eval_in_cell(cell, x),
            None => (0.0, 0.0),
        }
    }

    fn integrate<G: Fn(f64, f64, f64) -> f64>(&self, g: G) -> f64 {
        let rule = quadrature::rule();
        self.points
            .windows(2)
            .enumerate()
            .map(|(cell, w)| {
                rule.points(w[0], w[1])
                    .map(|(x, wt)| {
                        let (v, d) = self.eval_in_cell(cell, x);
                        wt * g(x, v, d)
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    fn length(&self) -> f64 {
        let n = self.points.len();
        (self.points[n - 1] - self.points[0]) / (n - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Shape {
    Closed(Vec<Component>),
    Sampled(SampledGrid),
}

/// A real, normalizable wave function on a line or radial half-line.
///
/// Closed forms are even functions of `r = |x|`; a sampled function on a line
/// carries its own negative half in the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    shape: Shape,
    dimension: Dimension,
    scale: f64,
}

impl RadialFunction {
    /// `exp(-rate * r)`.
    pub fn exponential(rate: f64, dimension: Dimension) -> Result<Self> {
        Self::mixture(vec![Component::Exponential { coeff: 1.0, rate }], dimension)
    }

    /// `exp(-rate * r^2)`.
    pub fn gaussian(rate: f64, dimension: Dimension) -> Result<Self> {
        Self::mixture(vec![Component::Gaussian { coeff: 1.0, rate }], dimension)
    }

    pub fn mixture(components: Vec<Component>, dimension: Dimension) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("mixture needs at least one component".into()));
        }
        for c in &components {
            c.validate()?;
        }
        Ok(Self {
            shape: Shape::Closed(components),
            dimension,
            scale: 1.0,
        })
    }

    pub fn sampled(grid: SampledGrid, dimension: Dimension) -> Result<Self> {
        if dimension == Dimension::Radial && grid.points[0] < 0.0 {
            return Err(Error::Domain("radial grid must start at r >= 0".into()));
        }
        Ok(Self {
            shape: Shape::Sampled(grid),
            dimension,
            scale: 1.0,
        })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn components(&self) -> Option<&[Component]> {
        match &self.shape {
            Shape::Closed(c) => Some(c),
            Shape::Sampled(_) => None,
        }
    }

    pub fn grid(&self) -> Option<&SampledGrid> {
        match &self.shape {
            Shape::Closed(_) => None,
            Shape::Sampled(g) => Some(g),
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.shape, Shape::Sampled(_))
    }

    /// `(psi(x), psi'(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let (v, d) = match &self.shape {
            Shape::Closed(components) => {
                let r = x.abs();
                let (v, d) = components.iter().fold((0.0, 0.0), |(v, d), c| {
                    let (cv, cd) = c.value_and_slope(r);
                    (v + cv, d + cd)
                });
                (v, if x < 0.0 { -d } else { d })
            }
            Shape::Sampled(grid) => grid.eval(x),
        };
        (self.scale * v, self.scale * d)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval(x).1
    }

    /// A length on which the function varies appreciably.
    fn length(&self) -> f64 {
        match &self.shape {
            Shape::Closed(components) => components
                .iter()
                .map(Component::length)
                .fold(f64::INFINITY, f64::min),
            Shape::Sampled(grid) => grid.length(),
        }
    }

    /// `int g(x, psi(x), psi'(x)) dmu(x)` over the function's whole domain.
    pub fn integrate<G: Fn(f64, f64, f64) -> f64>(&self, g: G) -> Result<f64> {
        self.integrate_with_floor(g, 0.0)
    }

    /// [`integrate`](Self::integrate) with an absolute error floor, for
    /// integrands that may vanish identically.
    pub fn integrate_with_floor<G: Fn(f64, f64, f64) -> f64>(&self, g: G, floor: f64) -> Result<f64> {
        let dim = self.dimension;
        let total = match &self.shape {
            Shape::Closed(_) => {
                let length = self.length();
                let positive = quadrature::half_line_with_floor(
                    |r| {
                        let (v, d) = self.eval(r);
                        g(r, v, d) * dim.weight(r)
                    },
                    length,
                    floor,
                )?;
                match dim {
                    Dimension::Radial => positive,
                    Dimension::Line => {
                        positive
                            + quadrature::half_line_with_floor(
                                |r| {
                                    let (v, d) = self.eval(-r);
                                    g(-r, v, d)
                                },
                                length,
                                floor,
                            )?
                    }
                }
            }
            Shape::Sampled(grid) => {
                let s = self.scale;
                grid.integrate(|x, v, d| g(x, s * v, s * d) * dim.weight(x))
            }
        };
        if total.is_finite() {
            Ok(total)
        } else {
            Err(Error::Domain("integral is not finite".into()))
        }
    }

    pub fn norm_squared(&self) -> Result<f64> {
        self.integrate(|_, v, _| v * v)
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm2 = self.norm_squared()?;
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::Domain(format!(
                "function is not normalizable (norm^2 = {norm2})"
            )));
        }
        let mut out = self.clone();
        out.scale /= norm2.sqrt();
        Ok(out)
    }

    /// `int |psi|^2 |x|^k dmu`.
    pub fn expect_r_pow(&self, k: i32) -> Result<f64> {
        if k < 0 && self.origin_divergent(k) {
            return Err(Error::Domain(format!(
                "<r^{k}> diverges at the origin for this {} state",
                self.dimension
            )));
        }
        self.integrate(|x, v, _| v * v * x.abs().powi(k))
    }

    /// `int |psi'|^2 dmu`.
    pub fn expect_p2(&self) -> Result<f64> {
        self.integrate(|_, _, d| d * d)
    }

    /// Origin estimate: `|psi|^2 |x|^k w(x) * x` must vanish as `x -> 0` for the
    /// integral to converge there.
    fn origin_divergent(&self, k: i32) -> bool {
        let length = self.length();
        let probe = |x: f64| {
            let v = self.value(x);
            v * v * x.abs().powi(k) * self.dimension.weight(x) * x.abs()
        };
        let sides: &[f64] = match self.dimension {
            Dimension::Radial => &[1.0],
            Dimension::Line => &[1.0, -1.0],
        };
        sides.iter().any(|&side| {
            let far = probe(side * 1e-6 * length);
            let near = probe(side * 1e-9 * length);
            far > 0.0 && near >= 0.5 * far
        })
    }

    /// `psi(lambda * r)`, not renormalized.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        ensure_positive("rescaling factor", lambda)?;
        let shape = match &self.shape {
            Shape::Closed(c) => Shape::Closed(c.iter().map(|c| c.rescaled(lambda)).collect()),
            Shape::Sampled(g) => Shape::Sampled(SampledGrid {
                points: g.points.iter().map(|p| p / lambda).collect(),
                values: g.values.clone(),
            }),
        };
        Ok(Self {
            shape,
            dimension: self.dimension,
            scale: self.scale,
        })
    }

    /// The same state with its sign flipped (a global phase of -1).
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.scale = -out.scale;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn radial_exponential_normalizes() {
        let psi = RadialFunction::exponential(1.0, Dimension::Radial)
            .unwrap()
            .normalize()
            .unwrap();
        assert!((psi.norm_squared().unwrap() - 1.0).abs() < 1e-13);
        // 1 / sqrt(int e^{-2r} r^2 dr) = 2
        assert!((psi.value(0.0) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn line_gaussian_normalizes() {
        let psi = RadialFunction::gaussian(0.5, Dimension::Line)
            .unwrap()
            .normalize()
            .unwrap();
        let peak = std::f64::consts::PI.powf(-0.25);
        assert!((psi.value(0.0) - peak).abs() < 1e-13);
        assert!((psi.value(-1.3) - psi.value(1.3)).abs() < 1e-15);
        assert!((psi.derivative(-1.3) + psi.derivative(1.3)).abs() < 1e-15);
    }

    #[test]
    fn mixture_norm_matches_gram_sum() {
        // int (sum c_i e^{-b_i r})^2 r^2 dr = sum_ij c_i c_j 2 / (b_i + b_j)^3
        let comps: [(f64, f64); 2] = [(0.3, 1.0), (0.7, 2.0)];
        let gram: f64 = comps
            .iter()
            .flat_map(|&(ci, bi)| comps.iter().map(move |&(cj, bj)| ci * cj * 2.0 / (bi + bj).powi(3)))
            .sum();
        let psi = RadialFunction::mixture(
            comps
                .iter()
                .map(|&(coeff, rate)| Component::Exponential { coeff, rate })
                .collect(),
            Dimension::Radial,
        )
        .unwrap();
        assert!(rel(psi.norm_squared().unwrap(), gram) < 1e-13);
        let unit = psi.normalize().unwrap();
        assert!((unit.norm_squared().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_function_is_not_normalizable() {
        let psi = RadialFunction::mixture(
            vec![Component::Exponential { coeff: 0.0, rate: 1.0 }],
            Dimension::Radial,
        )
        .unwrap();
        assert!(matches!(psi.normalize(), Err(Error::Domain(_))));
    }

    #[test]
    fn nonpositive_rates_rejected() {
        assert!(RadialFunction::exponential(0.0, Dimension::Radial).is_err());
        assert!(RadialFunction::gaussian(-1.0, Dimension::Line).is_err());
        assert!(RadialFunction::exponential(f64::NAN, Dimension::Radial).is_err());
    }

    #[test]
    fn hydrogenic_moments() {
        // Frozen from int r^{k+2} e^{-2 Z r} dr = (k+2)! / (2Z)^{k+3}.
        for z in [1.0, 2.0, 3.0] {
            let psi = RadialFunction::exponential(z, Dimension::Radial)
                .unwrap()
                .normalize()
                .unwrap();
            assert!(rel(psi.expect_r_pow(-1).unwrap(), z) < 1e-12);
            assert!(rel(psi.expect_r_pow(-2).unwrap(), 2.0 * z * z) < 1e-12);
            assert!(rel(psi.expect_r_pow(1).unwrap(), 1.5 / z) < 1e-12);
            assert!(rel(psi.expect_r_pow(2).unwrap(), 3.0 / (z * z)) < 1e-12);
            assert!(rel(psi.expect_p2().unwrap(), z * z) < 1e-12);
        }
    }

    #[test]
    fn oscillator_gaussian_moments() {
        // exp(-x^2 / 2): <x^2> = <p^2> = 1/2
        let psi = RadialFunction::gaussian(0.5, Dimension::Line)
            .unwrap()
            .normalize()
            .unwrap();
        assert!(rel(psi.expect_p2().unwrap(), 0.5) < 1e-12);
        assert!(rel(psi.expect_r_pow(2).unwrap(), 0.5) < 1e-12);
    }

    #[test]
    fn inverse_powers_diverge_on_a_line() {
        let psi = RadialFunction::gaussian(0.5, Dimension::Line)
            .unwrap()
            .normalize()
            .unwrap();
        assert!(matches!(psi.expect_r_pow(-2), Err(Error::Domain(_))));
        assert!(matches!(psi.expect_r_pow(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn p2_scales_quadratically() {
        let base = RadialFunction::exponential(1.0, Dimension::Radial).unwrap();
        let p0 = base.normalize().unwrap().expect_p2().unwrap();
        for lambda in [0.5, 2.0] {
            let p = base.rescaled(lambda).unwrap().normalize().unwrap().expect_p2().unwrap();
            assert!(rel(p, lambda * lambda * p0) < 1e-12);
        }
    }

    #[test]
    fn sampled_cubic_reproduces_cubics() {
        let points: Vec<f64> = (0..12).map(|i| 0.1 * i as f64 + 0.03 * (i % 3) as f64).collect();
        let f = |x: f64| 1.0 - x + 0.5 * x * x - 0.2 * x * x * x;
        let values = points.iter().map(|&x| f(x)).collect();
        let grid = SampledGrid::new(points, values).unwrap();
        let psi = RadialFunction::sampled(grid, Dimension::Radial).unwrap();
        for x in [0.0, 0.05, 0.47, 1.0] {
            let (v, d) = psi.eval(x);
            assert!((v - f(x)).abs() < 1e-13);
            assert!((d - (-1.0 + x - 0.6 * x * x)).abs() < 1e-12);
        }
        assert_eq!(psi.value(5.0), 0.0);
    }

    #[test]
    fn sampled_grid_validation() {
        assert!(SampledGrid::new(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(SampledGrid::new(vec![0.0, 1.0, 1.0, 2.0], vec![1.0; 4]).is_err());
        assert!(SampledGrid::new(vec![0.0, 1.0, 2.0, 3.0], vec![1.0; 3]).is_err());
        let g = SampledGrid::new(vec![-1.0, 0.0, 1.0, 2.0], vec![1.0; 4]).unwrap();
        assert!(RadialFunction::sampled(g, Dimension::Radial).is_err());
    }
}
