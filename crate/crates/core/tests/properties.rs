use proptest::prelude::*;

use ubound::angular;
use ubound::bounds::{self, BoundConstraint};
use ubound::helium::{self, TwoElectronTrial};
use ubound::minimizer::{self, Method};
use ubound::moments::{divergence_residual, Dimension, RadialFunction};
use ubound::saturating::{self, Family};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponential_moments_match_closed_forms(z in 0.3f64..5.0) {
        let psi = RadialFunction::exponential(z, Dimension::Radial).unwrap().normalize().unwrap();
        // <r^k> = (k+2)! / (2 (2Z)^k)
        for k in [-2, -1, 1, 2] {
            let exact = factorial((k + 2) as u32) / (2.0 * (2.0 * z).powi(k));
            prop_assert!(rel(psi.expect_r_pow(k).unwrap(), exact) < 1e-8, "k={}", k);
        }
        prop_assert!(rel(psi.expect_p2().unwrap(), z * z) < 1e-8);
    }

    #[test]
    fn gaussian_moments_match_closed_forms(a in 0.1f64..5.0) {
        let line = RadialFunction::gaussian(a, Dimension::Line).unwrap().normalize().unwrap();
        prop_assert!(rel(line.expect_r_pow(2).unwrap(), 0.25 / a) < 1e-8);
        prop_assert!(rel(line.expect_p2().unwrap(), a) < 1e-8);
        let radial = RadialFunction::gaussian(a, Dimension::Radial).unwrap().normalize().unwrap();
        prop_assert!(rel(radial.expect_r_pow(2).unwrap(), 0.75 / a) < 1e-8);
        prop_assert!(rel(radial.expect_p2().unwrap(), 3.0 * a) < 1e-8);
    }

    #[test]
    fn p2_ignores_phase_and_scales_quadratically(seed in any::<u64>(), index in 0u64..1000) {
        let psi = bounds::random_trial(seed, index).unwrap();
        let p2 = psi.expect_p2().unwrap();
        prop_assert!(rel(psi.negated().expect_p2().unwrap(), p2) < 1e-12);
        for lambda in [0.5, 2.0] {
            let scaled = psi.rescaled(lambda).unwrap().normalize().unwrap();
            prop_assert!(rel(scaled.expect_p2().unwrap(), lambda * lambda * p2) < 1e-8);
        }
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>(), index in 0u64..1000) {
        let once = bounds::random_trial(seed, index).unwrap();
        let twice = once.normalize().unwrap();
        for i in 0..50 {
            let x = -5.0 + 0.2 * i as f64;
            let x = if once.dimension() == Dimension::Radial { x.abs() } else { x };
            prop_assert!((once.value(x) - twice.value(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn divergence_converges_at_second_order(
        n in 1i32..=3,
        p in prop::array::uniform3(-2.0f64..2.0),
    ) {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        prop_assume!(r > 0.5);
        let coarse = divergence_residual(n, p, 1e-3).unwrap();
        let fine = divergence_residual(n, p, 5e-4).unwrap();
        prop_assert!(coarse < 1e-5);
        if coarse > 1e-10 {
            let ratio = coarse / fine;
            prop_assert!((ratio - 4.0).abs() < 0.8, "ratio {}", ratio);
        }
    }

    #[test]
    fn random_states_respect_every_bound(seed in any::<u64>()) {
        for report in bounds::fuzz_bounds(8, seed).unwrap() {
            for row in report.rows {
                prop_assert!(row.gap >= -1e-9, "{:?}", row);
            }
        }
    }

    #[test]
    fn numeric_minimizer_agrees_with_analytic(
        m in 0.1f64..10.0,
        k in 0.1f64..10.0,
        z in 0.5f64..5.0,
        l in 0u32..=4,
        c in 0.0f64..3.0,
        dim in prop::sample::select(vec![1u32, 3]),
    ) {
        let systems = [
            minimizer::SystemSpec::oscillator(m, k, dim).unwrap(),
            minimizer::SystemSpec::hydrogenic(z, l).unwrap(),
            minimizer::SystemSpec::helium(c).unwrap(),
        ];
        for system in systems {
            let a = minimizer::solve(&system, Method::Analytic).unwrap();
            let n = minimizer::solve(&system, Method::Numeric).unwrap();
            prop_assert!(rel(n.e_min, a.e_min) < 1e-8, "{:?}", system);
            prop_assert!(a.boundary_gap().unwrap().abs() < 1e-10);
            prop_assert!(n.boundary_gap().unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn oscillator_energy_scales_with_frequency(m in 0.1f64..10.0, k in 0.1f64..10.0) {
        for dim in [1, 3] {
            let unit = minimizer::solve_oscillator(1.0, 1.0, dim, Method::Analytic).unwrap().e_min;
            let e = minimizer::solve_oscillator(m, k, dim, Method::Analytic).unwrap().e_min;
            prop_assert!(rel(e, unit * (k / m).sqrt()) < 1e-12);
        }
    }

    #[test]
    fn helium_ratio_is_independent_of_decay(beta in 0.1f64..10.0) {
        let m = helium::moments_closed_form(&TwoElectronTrial::new(beta).unwrap());
        prop_assert!((m.c - 0.625).abs() < 1e-12);
        prop_assert!(rel(m.x, m.y * m.y) < 1e-12);
    }
}

#[test]
fn saturating_states_close_their_bounds() {
    for km in [0.25, 1.0, 4.0] {
        let psi = saturating::closed_form(&Family::oscillator(km, 1.0).unwrap()).unwrap();
        let row = bounds::evaluate_bound(&BoundConstraint::Kennard1d, &psi).unwrap();
        assert!(row.gap.abs() < 1e-8, "km={km}: {}", row.gap);
    }
    for z in [1.0, 2.0, 3.0] {
        let psi = RadialFunction::exponential(z, Dimension::Radial).unwrap().normalize().unwrap();
        for n in 0..=2 {
            let row = bounds::evaluate_bound(&BoundConstraint::radial(n).unwrap(), &psi).unwrap();
            if n == 1 {
                assert!(row.gap.abs() < 1e-8);
            } else {
                assert!(row.gap > 1e-3, "n={n}: {}", row.gap);
            }
        }
    }
}

#[test]
fn oscillator_vector_length_vanishes_only_at_saturation() {
    let family = Family::oscillator(1.0, 1.0).unwrap();
    let alpha = saturating::build_ode(family).unwrap().alpha.alpha;
    let psi = saturating::closed_form(&family).unwrap();
    assert!(bounds::oscillator_vector_length(&psi, alpha).unwrap() < 1e-8);
    let wide = RadialFunction::gaussian(0.2, Dimension::Line).unwrap().normalize().unwrap();
    assert!(bounds::oscillator_vector_length(&wide, alpha).unwrap() > 1e-3);
}

#[test]
fn ode_round_trip_and_energy_closure() {
    let families = [
        Family::oscillator(0.25, 1.0).unwrap(),
        Family::oscillator(1.0, 1.0).unwrap(),
        Family::oscillator(4.0, 2.0).unwrap(),
        Family::hydrogenic(1.0).unwrap(),
        Family::hydrogenic(2.0).unwrap(),
        Family::hydrogenic(3.0).unwrap(),
    ];
    for family in families {
        let ode = saturating::build_ode(family).unwrap();
        let psi = saturating::integrate_ode(&ode).unwrap();
        let id = match family {
            Family::Oscillator1d { .. } => "kennard_1d",
            Family::Hydrogenic { .. } => "radial_n1",
        };
        let row = bounds::check_all_bounds(&psi)
            .unwrap()
            .into_iter()
            .find(|r| r.id == id)
            .unwrap();
        assert!(row.gap.abs() < 1e-7, "{family:?}: {}", row.gap);
        let exact = minimizer::solve(&saturating_system(family), Method::Analytic).unwrap().e_min;
        let e = saturating::energy_expectation(&family, &psi).unwrap();
        assert!((e - exact).abs() < 1e-7, "{family:?}: {e} vs {exact}");
        assert!(saturating::residual_check(&psi, &ode).unwrap() < 1e-8);
    }
}

fn saturating_system(family: Family) -> minimizer::SystemSpec {
    match family {
        Family::Oscillator1d { k, m } => minimizer::SystemSpec::oscillator(m, k, 1).unwrap(),
        Family::Hydrogenic { z } => minimizer::SystemSpec::hydrogenic(z, 0).unwrap(),
    }
}

#[test]
fn residual_detects_non_solutions() {
    let ode = saturating::build_ode(Family::hydrogenic(1.0).unwrap()).unwrap();
    let off = RadialFunction::exponential(1.1, Dimension::Radial).unwrap().normalize().unwrap();
    assert!(saturating::residual_check(&off, &ode).unwrap() > 1e-8);
}

#[test]
fn halving_the_step_quarters_the_deviation() {
    for family in [Family::oscillator(1.0, 1.0).unwrap(), Family::hydrogenic(1.0).unwrap()] {
        let base = saturating::build_ode(family).unwrap();
        let reference = saturating::closed_form(&family).unwrap();
        let deviation = |h: f64| {
            let ode = base.with_grid(h, base.grid.extent).unwrap();
            saturating::max_relative_deviation(&saturating::integrate_ode(&ode).unwrap(), &reference).unwrap()
        };
        let h = base.grid.step;
        let ratio = deviation(h) / deviation(0.5 * h);
        assert!(ratio >= 4.0, "{family:?}: ratio {ratio}");
    }
}

#[test]
fn angular_symmetry_and_construction() {
    for l in 0..=10 {
        let li = l as i32;
        for m in -li..=li {
            let f = angular::moment_floor(l, m).unwrap();
            assert!((f.lx2 - f.ly2).abs() < 1e-12);
            assert!((f.l2 - f.casimir).abs() < 1e-12);
        }
    }
    for l in 0..=25 {
        let rep = angular::build_rep(l).unwrap();
        assert!(rep.commutator_residual() < 1e-12 * (1.0 + f64::from(l * l)), "l={l}");
        assert!(rep.casimir_residual() < 1e-12 * (1.0 + f64::from(l * l)), "l={l}");
        assert!(rep.hermiticity_residual() == 0.0);
    }
}
