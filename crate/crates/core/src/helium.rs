//! Helium moments for the separable trial `exp(-beta (r1 + r2))`.
//!
//! The ratio `C = <r12^-1> / <r^-1>` is computed two ways: exactly, by
//! angular averaging (the `1/r_>` kernel) and nested radial integrals of
//! polynomial-exponential terms, and by direct Monte Carlo sampling of
//! `|psi|^2`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};
use crate::minimizer::{self, golden_section, Method, SolveResult};
use crate::seeding;

/// Samples per Monte Carlo batch; each batch has its own sub-seed.
pub const BATCH_SIZE: usize = 50_000;
pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoElectronTrial {
    pub beta: f64,
}

impl TwoElectronTrial {
    pub fn new(beta: f64) -> Result<Self> {
        ensure_positive("beta", beta)?;
        Ok(Self { beta })
    }
}

/// Per-electron `x = <p^2>`, `y = <r^-1>`, and `z = <r12^-1>`, `C = z / y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeliumMoments {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub c: f64,
}

/// `sum_i coeff_i r^power_i exp(-rate_i r)`.
#[derive(Debug, Clone, PartialEq, Default)]
struct ExpPoly(Vec<(f64, u32, f64)>);

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl ExpPoly {
    fn term(coeff: f64, power: u32, rate: f64) -> Self {
        Self(vec![(coeff, power, rate)])
    }

    fn mul(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .flat_map(|&(c1, n1, s1)| other.0.iter().map(move |&(c2, n2, s2)| (c1 * c2, n1 + n2, s1 + s2)))
                .collect(),
        )
    }

    /// Divides by `r`; every term must carry at least one power of `r`.
    fn over_r(&self) -> Self {
        Self(
            self.0
                .iter()
                .map(|&(c, n, s)| {
                    assert!(n >= 1, "division by r of a term regular at the origin");
                    (c, n - 1, s)
                })
                .collect(),
        )
    }

    /// `int_0^inf`, with `int r^n e^{-s r} = n! / s^{n+1}`.
    fn integral(&self) -> f64 {
        self.0
            .iter()
            .map(|&(c, n, s)| {
                assert!(s > 0.0, "integral of a non-decaying term");
                c * factorial(n) / s.powi(n as i32 + 1)
            })
            .sum()
    }

    /// `R -> int_0^R`, using
    /// `int_0^R r^n e^{-s r} dr = n!/s^{n+1} (1 - e^{-sR} sum_{j<=n} (sR)^j / j!)`.
    fn cumulative(&self) -> Self {
        let mut out = Vec::new();
        for &(c, n, s) in &self.0 {
            let full = c * factorial(n) / s.powi(n as i32 + 1);
            out.push((full, 0, 0.0));
            for j in 0..=n {
                out.push((-full * s.powi(j as i32) / factorial(j), j, s));
            }
        }
        Self(out)
    }
}

/// Exact moments of the trial.
pub fn moments_closed_form(trial: &TwoElectronTrial) -> HeliumMoments {
    let beta = trial.beta;
    // radial density of one electron: r^2 e^{-2 beta r} / N
    let unnormalized = ExpPoly::term(1.0, 2, 2.0 * beta);
    let density = ExpPoly::term(1.0 / unnormalized.integral(), 2, 2.0 * beta);
    // |psi'|^2 r^2 = beta^2 r^2 e^{-2 beta r}
    let x = beta * beta * density.integral();
    let y = density.over_r().integral();
    // <1/r12> = int int rho(r1) rho(r2) / max(r1, r2) = 2 int rho(r) / r F(r) dr
    let z = 2.0 * density.over_r().mul(&density.cumulative()).integral();
    HeliumMoments { x, y, z, c: z / y }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloMoments {
    pub moments: HeliumMoments,
    pub y_error: f64,
    pub z_error: f64,
    pub c_error: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    n: f64,
    y: f64,
    z: f64,
    yy: f64,
    zz: f64,
    yz: f64,
}

impl Sums {
    fn add(self, o: Sums) -> Sums {
        Sums {
            n: self.n + o.n,
            y: self.y + o.y,
            z: self.z + o.z,
            yy: self.yy + o.yy,
            zz: self.zz + o.zz,
            yz: self.yz + o.yz,
        }
    }
}

fn isotropic<R: Rng>(rng: &mut R, r: f64) -> [f64; 3] {
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    [r * sin_t * phi.cos(), r * sin_t * phi.sin(), r * cos_t]
}

fn sample_batch(beta: f64, seed: u64, batch: u64, count: usize) -> Sums {
    let mut rng = seeding::rng_for(seed, batch);
    // |psi|^2 r^2 = r^2 e^{-2 beta r}: Gamma(shape 3, scale 1 / (2 beta))
    let radial = Gamma::new(3.0, 0.5 / beta).expect("valid gamma parameters");
    let mut s = Sums::default();
    for _ in 0..count {
        let r1 = radial.sample(&mut rng);
        let r2 = radial.sample(&mut rng);
        let a = isotropic(&mut rng, r1);
        let b = isotropic(&mut rng, r2);
        let r12 = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
        let y = 0.5 * (1.0 / r1 + 1.0 / r2);
        let z = 1.0 / r12;
        s.n += 1.0;
        s.y += y;
        s.z += z;
        s.yy += y * y;
        s.zz += z * z;
        s.yz += y * z;
    }
    s
}

/// Estimates `y`, `z` and `C` by sampling both electrons from `|psi|^2`.
///
/// `x` is the local-energy estimate `2 beta <r^-1> - beta^2`. Batches run in
/// parallel but are reduced in index order, so results depend only on
/// `(trial, samples, seed)`.
pub fn moments_monte_carlo(trial: &TwoElectronTrial, samples: usize, seed: u64) -> Result<MonteCarloMoments> {
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let batches = samples.div_ceil(BATCH_SIZE);
    let partial: Vec<Sums> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH_SIZE.min(samples - b * BATCH_SIZE);
            sample_batch(trial.beta, seed, b as u64, count)
        })
        .collect();
    let s = partial.into_iter().fold(Sums::default(), Sums::add);

    let n = s.n;
    let y = s.y / n;
    let z = s.z / n;
    let var_y = (s.yy / n - y * y) * n / (n - 1.0);
    let var_z = (s.zz / n - z * z) * n / (n - 1.0);
    let cov = (s.yz / n - y * z) * n / (n - 1.0);
    let c = z / y;
    let var_c = (var_z - 2.0 * c * cov + c * c * var_y) / (y * y);
    let beta = trial.beta;
    Ok(MonteCarloMoments {
        moments: HeliumMoments {
            x: 2.0 * beta * y - beta * beta,
            y,
            z,
            c,
        },
        y_error: (var_y / n).sqrt(),
        z_error: (var_z / n).sqrt(),
        c_error: (var_c.max(0.0) / n).sqrt(),
        samples,
        seed,
    })
}

/// `E(beta) = x - 4y + z`: two kinetic halves, two nuclear attractions with
/// `Z = 2`, one repulsion.
pub fn helium_energy(trial: &TwoElectronTrial) -> f64 {
    let m = moments_closed_form(trial);
    m.x - 4.0 * m.y + m.z
}

/// Conventional variational minimum of [`helium_energy`] over `beta`.
pub fn optimal_trial() -> Result<(TwoElectronTrial, f64)> {
    let energy = |beta: f64| Ok(helium_energy(&TwoElectronTrial::new(beta)?));
    let (a, b, _) = golden_section(energy, 0.05, 10.0)?;
    let trial = TwoElectronTrial::new(0.5 * (a + b))?;
    Ok((trial, helium_energy(&trial)))
}

/// Solves the constrained problem with `C` taken from the trial's exact moments.
pub fn solve_with_trial(trial: &TwoElectronTrial, method: Method) -> Result<SolveResult> {
    minimizer::solve_helium(moments_closed_form(trial).c, method)
}
