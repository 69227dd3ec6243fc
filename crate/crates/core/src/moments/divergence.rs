use crate::error::{Error, Result};

/// Step used by default for the central differences.
pub const DEFAULT_STEP: f64 = 1e-4;

fn norm(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// `|div(r_vec r^-n)_numeric - (3 - n) r^-n|` at one point, by central
/// differences with step `step`.
pub fn divergence_residual(n: i32, point: [f64; 3], step: f64) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Domain(format!("step must be > 0, got {step}")));
    }
    let r = norm(point);
    if !(r > step) {
        return Err(Error::Domain(format!(
            "point {point:?} lies within {step} of the origin"
        )));
    }
    let field = |p: [f64; 3], i: usize| p[i] * norm(p).powi(-n);
    let numeric: f64 = (0..3)
        .map(|i| {
            let mut fwd = point;
            let mut back = point;
            fwd[i] += step;
            back[i] -= step;
            (field(fwd, i) - field(back, i)) / (2.0 * step)
        })
        .sum();
    let exact = f64::from(3 - n) * r.powi(-n);
    Ok((numeric - exact).abs())
}

/// Largest [`divergence_residual`] over `points`.
pub fn divergence_identity_check(n: i32, points: &[[f64; 3]], step: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Domain("no sample points given".into()));
    }
    points.iter().try_fold(0.0f64, |worst, &p| {
        Ok(worst.max(divergence_residual(n, p, step)?))
    })
}
