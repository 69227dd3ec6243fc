//! Gauss–Legendre quadrature: fixed rules, adaptive bisection on a panel, and
//! a half-line driver for decaying integrands on `[0, inf)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on the roots of `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess for the i-th root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Mapped `(abscissa, weight)` pairs for `[a, b]`.
    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 20-point rule used by every panel.
pub fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

const MAX_DEPTH: u32 = 40;
/// Upper limit on accepted subpanels per adaptive call.
const MAX_PANELS: usize = 1 << 14;
const REL_TOL: f64 = 1e-14;

/// Adaptive bisection on `[a, b]`: a panel is accepted once its one-panel and
/// two-panel estimates agree to `REL_TOL` relative or to its share of
/// `abs_tol` absolute. Past `MAX_PANELS` subpanels the remaining estimates are
/// accepted as they stand.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut accepted = 0;
    let mut stack = vec![(a, b, rule().integrate(f, a, b), abs_tol, MAX_DEPTH)];
    while let Some((a, b, whole, tol, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = rule().integrate(f, a, m);
        let right = rule().integrate(f, m, b);
        let halves = left + right;
        if !halves.is_finite() {
            return Err(Error::Domain(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        let converged = (whole - halves).abs() <= REL_TOL * halves.abs() + tol;
        if converged || depth == 0 || accepted + stack.len() >= MAX_PANELS {
            total += halves;
            accepted += 1;
        } else {
            stack.push((m, b, right, 0.5 * tol, depth - 1));
            stack.push((a, m, left, 0.5 * tol, depth - 1));
        }
    }
    Ok(total)
}

/// Number of graded panels `[L 2^-(j+1), L 2^-j]` laid down next to the origin.
const GRADED_PANELS: i32 = 60;
/// Relative size of the neglected tail at which the outward sweep stops.
const TAIL_TOL: f64 = 1e-14;
/// Outward sweep gives up (divergent tail) past this multiple of the length scale.
const MAX_REACH: f64 = 1e8;

/// Integrates a decaying `f` over `[0, inf)`.
///
/// `length` is the characteristic length of the integrand. Panels are graded
/// geometrically toward the origin, then laid out with doubling widths until
/// the accumulated value dwarfs both the last panel and the tail estimate
/// `|f(R)| R`.
pub fn half_line<F: Fn(f64) -> f64>(f: F, length: f64) -> Result<f64> {
    half_line_with_floor(f, length, 0.0)
}

/// [`half_line`] with an absolute error floor, for integrands whose exact
/// value may be zero.
pub fn half_line_with_floor<F: Fn(f64) -> f64>(f: F, length: f64, floor: f64) -> Result<f64> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!("invalid length scale {length}")));
    }
    let mut acc = 0.0;
    let innermost = length * 2f64.powi(-GRADED_PANELS);
    let panel_floor = floor / f64::from(GRADED_PANELS + 32);
    acc += adaptive(&f, 0.0, innermost, panel_floor)?;
    for j in (0..GRADED_PANELS).rev() {
        let a = length * 2f64.powi(-(j + 1));
        let b = length * 2f64.powi(-j);
        acc += adaptive(&f, a, b, panel_floor)?;
    }
    let mut a = length;
    loop {
        let b = 2.0 * a;
        let panel = adaptive(&f, a, b, panel_floor.max(1e-17 * acc.abs()))?;
        acc += panel;
        let tail = f(b).abs() * b;
        if !tail.is_finite() {
            return Err(Error::Domain(format!("integrand is not finite at r = {b}")));
        }
        let scale = (TAIL_TOL * acc.abs()).max(floor);
        if panel.abs() <= scale && tail <= scale {
            return Ok(acc);
        }
        if b > MAX_REACH * length {
            return Err(Error::Domain(
                "integral does not converge: tail does not decay".into(),
            ));
        }
        a = b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(5);
        // exact through degree 9
        let v = gl.integrate(|x| x.powi(8) + 3.0 * x.powi(3), -1.0, 1.0);
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        let w: f64 = gl.points(0.0, 2.0).map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-15);
    }

    #[test]
    fn twenty_point_weights_sum() {
        let s: f64 = rule().points(-1.0, 1.0).map(|(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        assert_eq!(rule().len(), 20);
    }

    #[test]
    fn half_line_gamma_integrals() {
        // int_0^inf r^n e^{-a r} dr = n! / a^{n+1}
        for (n, a, exact) in [(2, 2.0, 0.25), (0, 0.4, 2.5), (4, 10.0, 24.0 / 1e5)] {
            let v = half_line(|r: f64| r.powi(n) * (-a * r).exp(), 1.0).unwrap();
            assert!(((v - exact) / exact).abs() < 1e-13, "n={n} a={a} v={v}");
        }
    }

    #[test]
    fn half_line_gaussian() {
        let v = half_line(|x: f64| (-x * x).exp(), 1.0).unwrap();
        let exact = 0.5 * std::f64::consts::PI.sqrt();
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn non_decaying_tail_is_rejected() {
        assert!(matches!(half_line(|_| 1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_integrand() {
        assert_eq!(half_line(|_| 0.0, 1.0).unwrap(), 0.0);
    }
}
