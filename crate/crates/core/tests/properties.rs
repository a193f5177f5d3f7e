use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use sqed_core::numerics::{
    integrate_semi_infinite, log_gamma_complex, oscillatory_phase_integral, oscillatory_phase_trace, PhaseSign,
};
use sqed_core::oracle::{discrete_variance, ModeGrid, VarianceEvaluator};
use sqed_core::rindler::{rindler_diffusion_rate, rindler_drag, RindlerDragForm};
use sqed_core::thermal_kinetics::{balance_residual, drag_force, DragForm};
use sqed_core::{Occupation, OscillatorParams, QuadratureSpec, RindlerParams};

#[test]
fn phase_integral_scaling_in_omega() {
    let spec = QuadratureSpec::default();
    for &(w, om, a) in &[(0.5, 1.0, 1.0), (1.0, 2.0, 1.5), (0.7, 0.4, 0.8)] {
        let one = oscillatory_phase_integral(w, om, a, PhaseSign::Positive, &spec).unwrap();
        let two = oscillatory_phase_integral(2.0 * w, om, a, PhaseSign::Positive, &spec).unwrap();
        let phase = Complex64::from_polar(1.0, -(om / a) * 2f64.ln());
        assert!((two - one * phase).norm() / one.norm() < 1e-8);
    }
}

#[test]
fn ladder_extrapolants_are_cauchy() {
    let spec = QuadratureSpec::default();
    let t = oscillatory_phase_trace(1.0, 2.0, 1.0, PhaseSign::Negative, &spec).unwrap();
    assert_eq!(t.extrapolants.len(), spec.epsilon_ladder.len());
    assert!(t.error_estimate < spec.rel_tol * t.value.norm());
}

#[test]
fn variance_is_independent_of_worker_count() {
    let p = OscillatorParams::default_dimensionless();
    let occ = Occupation::planck(1.0).unwrap();
    let grid = ModeGrid::new(1000.0, 2000).unwrap();
    let eval = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| VarianceEvaluator::new(grid, &occ, &p, true).unwrap().variance(50.0).unwrap())
    };
    assert_eq!(eval(1).to_bits(), eval(4).to_bits());
}

#[test]
fn unruh_equivalence_across_accelerations() {
    let spec = QuadratureSpec::default();
    let p = OscillatorParams::default_dimensionless();
    for &a in &[0.5, 2.0, 7.0, 30.0] {
        let d = rindler_diffusion_rate(&RindlerParams::new(a).unwrap(), &p, &spec).unwrap();
        assert!(d.relative_difference() < 1e-8, "a={a}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_modulus_on_imaginary_axis(y in 0.1f64..10.0) {
        let lg = log_gamma_complex(Complex64::new(0.0, y)).unwrap();
        let want = PI / (y * (PI * y).sinh());
        prop_assert!(((2.0 * lg.re).exp() / want - 1.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_integral_is_linear(
        a in 0.2f64..3.0, b in 0.2f64..3.0, k in 0u32..4,
        c1 in -2.0f64..2.0, c2 in -2.0f64..2.0,
    ) {
        let spec = QuadratureSpec::default();
        let f = |w: f64| w.powi(k as i32) * (-a * w).exp();
        let g = |w: f64| (-b * w * w).exp() / (1.0 + w);
        let i_f = integrate_semi_infinite(f, &spec).unwrap();
        let i_g = integrate_semi_infinite(g, &spec).unwrap();
        let i_sum = integrate_semi_infinite(|w| c1 * f(w) + c2 * g(w), &spec).unwrap();
        let lin = c1 * i_f.value + c2 * i_g.value;
        let tol = 10.0 * spec.rel_tol * (c1.abs() * i_f.value.abs() + c2.abs() * i_g.value.abs()) + 1e-14;
        prop_assert!((i_sum.value - lin).abs() <= tol, "{} vs {}", i_sum.value, lin);
    }

    #[test]
    fn drag_is_odd_and_dissipative(v in 0.001f64..0.98, t in 0.05f64..10.0) {
        let spec = QuadratureSpec::default();
        let p = OscillatorParams::default_dimensionless();
        let occ = Occupation::planck(t).unwrap();
        let fp = drag_force(v, &occ, &p, &spec, DragForm::ExactDifference).unwrap().value;
        let fm = drag_force(-v, &occ, &p, &spec, DragForm::ExactDifference).unwrap().value;
        prop_assert!(fp < 0.0);
        prop_assert!(((fp + fm) / fp).abs() < 1e-9);
    }

    #[test]
    fn balance_holds_at_any_temperature(t in 0.05f64..20.0) {
        let r = balance_residual(t, &OscillatorParams::default_dimensionless(), &QuadratureSpec::default()).unwrap();
        prop_assert!(r.pointwise_max <= 1e-12);
    }

    #[test]
    fn rindler_net_drag_matches_thermal(v in -0.5f64..0.5, a in 0.5f64..20.0) {
        let spec = QuadratureSpec::default();
        let p = OscillatorParams::default_dimensionless();
        let r = RindlerParams::new(a).unwrap();
        let x = rindler_drag(v, &r, &p, &spec, RindlerDragForm::NetLinearized).unwrap().value;
        let occ = Occupation::planck(r.unruh_temperature()).unwrap();
        let y = drag_force(v, &occ, &p, &spec, DragForm::Linearized).unwrap().value;
        prop_assert!((x - y).abs() <= 1e-12 * y.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn discrete_variance_is_nonnegative(t in 0.0f64..150.0, temp in 0.0f64..3.0) {
        let grid = ModeGrid::new(400.0, 800).unwrap();
        let occ = Occupation::planck(temp).unwrap();
        let v = discrete_variance(t, grid, &occ, &OscillatorParams::default_dimensionless()).unwrap();
        prop_assert!(v >= 0.0);
    }
}
