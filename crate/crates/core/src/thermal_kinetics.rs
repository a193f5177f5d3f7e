//! Drag force, momentum diffusion and the power balance for a particle
//! moving through a thermal (or tabulated) field.

use std::cell::RefCell;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numerics::{integrate_semi_infinite, solve_scalar_ode, Integral, QuadratureSpec, SampledCurve};
use crate::response::{alpha_abs_sq, alpha_identity_residual, alpha_imag, OscillatorParams};
use crate::spectral::{planck_occupation, BoostParams, Occupation};

/// Outcome of one of the `∫₀^∞ dω` integrals in this module.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticsResult {
    pub value: f64,
    pub estimated_error: f64,
    pub cutoff_used: f64,
    /// `(ω, integrand)` at every quadrature node, sorted by `ω`.
    pub integrand_samples: Option<Vec<(f64, f64)>>,
}

impl KineticsResult {
    pub(crate) fn from_integral(i: Integral, samples: Option<Vec<(f64, f64)>>) -> Self {
        KineticsResult {
            value: i.value,
            estimated_error: i.abs_error,
            cutoff_used: i.cutoff,
            integrand_samples: samples,
        }
    }
}

/// Which expression of the net force to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DragForm {
    /// `2ħ∫ω²α_I [n(γω(1+v)) − n(γω(1−v))] dω`
    ExactDifference,
    /// `4ħv∫ω³α_I ∂n/∂ω dω`
    Linearized,
}

/// Integrates `f` and optionally records the nodes it was evaluated at.
pub(crate) fn integrate_recorded<F>(f: F, spec: &QuadratureSpec, record: bool) -> Result<KineticsResult>
where
    F: Fn(f64) -> f64,
{
    if !record {
        return integrate_semi_infinite(f, spec).map(|i| KineticsResult::from_integral(i, None));
    }
    let samples = RefCell::new(Vec::new());
    let integral = integrate_semi_infinite(
        |w| {
            let v = f(w);
            samples.borrow_mut().push((w, v));
            v
        },
        spec,
    )?;
    let mut s = samples.into_inner();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    s.dedup_by(|a, b| a.0 == b.0);
    Ok(KineticsResult::from_integral(integral, Some(s)))
}

/// Net radiation-pressure force on a particle moving with velocity `v`.
///
/// Both forms satisfy `F·v <= 0` for a Planck field.
pub fn drag_force(
    v: f64,
    occ: &Occupation,
    p: &OscillatorParams,
    spec: &QuadratureSpec,
    form: DragForm,
) -> Result<KineticsResult> {
    drag_force_recorded(v, occ, p, spec, form, false)
}

pub fn drag_force_recorded(
    v: f64,
    occ: &Occupation,
    p: &OscillatorParams,
    spec: &QuadratureSpec,
    form: DragForm,
    record: bool,
) -> Result<KineticsResult> {
    let boost = BoostParams::new(v)?;
    match form {
        DragForm::ExactDifference => {
            let g = boost.gamma();
            integrate_recorded(
                |w| {
                    let dn = occ.n(g * w * (1.0 + v)) - occ.n(g * w * (1.0 - v));
                    2.0 * w * w * alpha_imag(w, p) * dn
                },
                spec,
                record,
            )
        }
        DragForm::Linearized => {
            // table-length is the only failure mode and it does not depend on ω
            occ.dn_domega(p.omega0())?;
            integrate_recorded(
                |w| 4.0 * v * w.powi(3) * alpha_imag(w, p) * occ.dn_domega(w).unwrap_or(0.0),
                spec,
                record,
            )
        }
    }
}

/// Nonrelativistic 3D QED friction with `ρ(ω) = ħω³n(ω)/π²`, for comparison:
/// `F = −4πv∫ω α_I [ρ − (ω/3)∂ρ/∂ω] dω`.
pub fn drag_force_qed3d(v: f64, temperature: f64, p: &OscillatorParams, spec: &QuadratureSpec) -> Result<KineticsResult> {
    BoostParams::new(v)?;
    if !(temperature > 0.0) {
        return Err(invalid(format!("temperature must be > 0, got {temperature}")));
    }
    let occ = Occupation::planck(temperature)?;
    integrate_recorded(
        |w| {
            let n = occ.n(w);
            let dn = occ.dn_domega(w).unwrap_or(0.0);
            let rho = w.powi(3) * n / (PI * PI);
            let drho = (3.0 * w * w * n + w.powi(3) * dn) / (PI * PI);
            -4.0 * PI * v * w * alpha_imag(w, p) * (rho - w / 3.0 * drho)
        },
        spec,
        false,
    )
}

/// `d⟨P_y²⟩/dt = 16πħ²∫ω⁴|α|²(n² + n) dω`.
pub fn diffusion_rate(occ: &Occupation, p: &OscillatorParams, spec: &QuadratureSpec) -> Result<KineticsResult> {
    diffusion_rate_recorded(occ, p, spec, false)
}

pub fn diffusion_rate_recorded(
    occ: &Occupation,
    p: &OscillatorParams,
    spec: &QuadratureSpec,
    record: bool,
) -> Result<KineticsResult> {
    integrate_recorded(|w| diffusion_integrand(w, occ, p), spec, record)
}

pub fn diffusion_integrand(w: f64, occ: &Occupation, p: &OscillatorParams) -> f64 {
    16.0 * PI * w.powi(4) * alpha_abs_sq(w, p) * occ.variance(w)
}

/// Pointwise and integrated residual of the power balance
/// `⟨d/dt (P²/2m) + F v⟩ = 0` with `⟨½mv²⟩ = ½k_BT`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceResidual {
    /// `max |r(ω)| / max(|diffusion term|, |drag term|)` over the grid.
    pub pointwise_max: f64,
    /// `∫ r(ω) dω` over the same range.
    pub integrated: f64,
    /// `integrated / ∫ diffusion term`.
    pub integrated_relative: f64,
    pub grid_points: usize,
    pub cutoff_used: f64,
    /// `max ||α|² − α_I/2πω| / |α|²` over the same grid.
    pub identity_max: f64,
}

/// Residual for a Planck field at temperature `T`. Vanishes to rounding.
pub fn balance_residual(temperature: f64, p: &OscillatorParams, spec: &QuadratureSpec) -> Result<BalanceResidual> {
    balance_residual_mismatched(temperature, temperature, p, spec)
}

/// Harness variant: the diffusion term sees `T_diffusion`, the drag term and
/// equipartition see `T_drag`.
pub fn balance_residual_mismatched(
    t_drag: f64,
    t_diffusion: f64,
    p: &OscillatorParams,
    spec: &QuadratureSpec,
) -> Result<BalanceResidual> {
    if !(t_drag > 0.0 && t_diffusion > 0.0) {
        return Err(invalid("balance temperatures must be > 0"));
    }
    let m = p.mass();
    let diff_occ = Occupation::planck(t_diffusion)?;
    let drag_occ = Occupation::planck(t_drag)?;
    let diffusion_term = |w: f64| 8.0 * PI / m * w.powi(4) * alpha_abs_sq(w, p) * diff_occ.variance(w);
    let drag_term = |w: f64| 4.0 * t_drag / m * w.powi(3) * alpha_imag(w, p) * drag_occ.dn_domega(w).unwrap_or(0.0);

    let reference = integrate_recorded(diffusion_term, spec, true)?;
    let grid = reference.integrand_samples.as_deref().unwrap_or(&[]);
    let mut pointwise_max: f64 = 0.0;
    let mut identity_max: f64 = 0.0;
    for &(w, t1) in grid {
        identity_max = identity_max.max((alpha_identity_residual(w, p) / alpha_abs_sq(w, p)).abs());
        let t2 = drag_term(w);
        let scale = t1.abs().max(t2.abs());
        if scale > 0.0 {
            pointwise_max = pointwise_max.max((t1 + t2).abs() / scale);
        }
    }
    let fixed = spec.clone().with_cutoff(reference.cutoff_used);
    let integrated = integrate_semi_infinite(|w| diffusion_term(w) + drag_term(w), &fixed)?.value;
    Ok(BalanceResidual {
        pointwise_max,
        integrated,
        integrated_relative: if reference.value != 0.0 { integrated / reference.value } else { 0.0 },
        grid_points: grid.len(),
        cutoff_used: reference.cutoff_used,
        identity_max,
    })
}

/// Integrates `dn/dω = −(n² + n)/T` outward from the Planck value at
/// `ω_ref`, covering `[ω_ref/10, 10 ω_ref]`.
pub fn recover_planck(temperature: f64, omega_ref: f64, spec: &QuadratureSpec) -> Result<SampledCurve> {
    if !(omega_ref > 0.0) {
        return Err(invalid(format!("omega_ref must be > 0, got {omega_ref}")));
    }
    let n0 = planck_occupation(omega_ref, temperature);
    let down = integrate_balance_ode(temperature, omega_ref, n0, omega_ref / 10.0, spec)?;
    let up = integrate_balance_ode(temperature, omega_ref, n0, omega_ref * 10.0, spec)?;
    let mut omega: Vec<f64> = down.omega.iter().rev().copied().collect();
    let mut values: Vec<f64> = down.values.iter().rev().copied().collect();
    omega.extend(up.omega.iter().skip(1));
    values.extend(up.values.iter().skip(1));
    Ok(SampledCurve { omega, values })
}

/// The balance ODE from an arbitrary starting value.
pub fn integrate_balance_ode(
    temperature: f64,
    omega_start: f64,
    n_start: f64,
    omega_end: f64,
    spec: &QuadratureSpec,
) -> Result<SampledCurve> {
    if !(temperature > 0.0) {
        return Err(invalid(format!("temperature must be > 0, got {temperature}")));
    }
    solve_scalar_ode(|_, n| -(n * n + n) / temperature, omega_start, n_start, omega_end, spec)
}

/// Force from modes propagating in one direction only, including the
/// vacuum `½`. Log-divergent, so it is only defined with an explicit cutoff.
pub fn single_direction_force(
    v: f64,
    occ: &Occupation,
    p: &OscillatorParams,
    omega_max: f64,
    spec: &QuadratureSpec,
) -> Result<KineticsResult> {
    let boost = BoostParams::new(v)?;
    let g = boost.gamma();
    let fixed = spec.clone().with_cutoff(omega_max);
    integrate_recorded(
        |w| 2.0 * w * w * alpha_imag(w, p) * (occ.n(g * w * (1.0 + v)) + 0.5),
        &fixed,
        false,
    )
}

/// [`single_direction_force`] at each cutoff, showing the `ln ω_max` growth.
pub fn single_direction_cutoff_scan(
    v: f64,
    occ: &Occupation,
    p: &OscillatorParams,
    cutoffs: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    cutoffs
        .iter()
        .map(|&c| single_direction_force(v, occ, p, c, spec).map(|r| (c, r.value)))
        .collect()
}

/// Drag at many velocities. Output order follows `velocities`.
pub fn drag_sweep(
    velocities: &[f64],
    occ: &Occupation,
    p: &OscillatorParams,
    spec: &QuadratureSpec,
    form: DragForm,
) -> Vec<Result<KineticsResult>> {
    velocities
        .par_iter()
        .map(|&v| drag_force(v, occ, p, spec, form))
        .collect()
}

/// One row of the integrand export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrandRow {
    pub omega: f64,
    pub integrand_drag: f64,
    pub integrand_diffusion: f64,
    pub residual: f64,
}

/// Exact-difference drag integrand, diffusion integrand and pointwise
/// balance residual at each `ω`.
pub fn integrand_table(
    v: f64,
    temperature: f64,
    p: &OscillatorParams,
    omegas: &[f64],
) -> Result<Vec<IntegrandRow>> {
    let boost = BoostParams::new(v)?;
    let occ = Occupation::planck(temperature)?;
    let g = boost.gamma();
    let m = p.mass();
    Ok(omegas
        .iter()
        .map(|&w| {
            let ai = alpha_imag(w, p);
            let dn = occ.n(g * w * (1.0 + v)) - occ.n(g * w * (1.0 - v));
            let t1 = 8.0 * PI / m * w.powi(4) * alpha_abs_sq(w, p) * occ.variance(w);
            let t2 = 4.0 * temperature / m * w.powi(3) * ai * occ.dn_domega(w).unwrap_or(0.0);
            IntegrandRow {
                omega: w,
                integrand_drag: 2.0 * w * w * ai * dn,
                integrand_diffusion: diffusion_integrand(w, &occ, p),
                residual: t1 + t2,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::spectral::OccupationTable;

    fn params() -> OscillatorParams {
        OscillatorParams::default_dimensionless()
    }

    fn planck(t: f64) -> Occupation {
        Occupation::planck(t).unwrap()
    }

    #[test]
    fn zero_velocity_gives_zero_force() {
        let spec = QuadratureSpec::default();
        for form in [DragForm::ExactDifference, DragForm::Linearized] {
            let r = drag_force(0.0, &planck(1.0), &params(), &spec, form).unwrap();
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn zero_temperature_gives_zero_force() {
        let spec = QuadratureSpec::default();
        let r = drag_force(0.3, &planck(0.0), &params(), &spec, DragForm::ExactDifference).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn forms_agree_at_small_velocity() {
        let spec = QuadratureSpec::default().with_tolerance(1e-12);
        let occ = planck(1.0);
        let v = 1e-3;
        let exact = drag_force(v, &occ, &params(), &spec, DragForm::ExactDifference).unwrap();
        let lin = drag_force(v, &occ, &params(), &spec, DragForm::Linearized).unwrap();
        assert!(exact.value < 0.0 && lin.value < 0.0);
        assert!((exact.value / lin.value - 1.0).abs() < 1e-5, "{} {}", exact.value, lin.value);
    }

    #[test]
    fn drag_is_odd_and_dissipative() {
        let spec = QuadratureSpec::default();
        let occ = planck(0.5);
        for &v in &[0.01, 0.2, 0.6, 0.89] {
            let fp = drag_force(v, &occ, &params(), &spec, DragForm::ExactDifference).unwrap();
            let fm = drag_force(-v, &occ, &params(), &spec, DragForm::ExactDifference).unwrap();
            assert!(fp.value < 0.0, "v={v}");
            assert!(((fp.value + fm.value) / fp.value).abs() < 1e-9, "v={v}");
        }
    }

    #[test]
    fn superluminal_velocity_is_rejected() {
        let spec = QuadratureSpec::default();
        let r = drag_force(1.5, &planck(1.0), &params(), &spec, DragForm::ExactDifference);
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn linearized_needs_a_smooth_table() {
        let spec = QuadratureSpec::default();
        let table = Occupation::Tabulated(OccupationTable::new(vec![0.5, 2.0], vec![1.0, 0.1]).unwrap());
        let r = drag_force(0.1, &table, &params(), &spec, DragForm::Linearized);
        assert!(matches!(r, Err(Error::DerivativeUnavailable(_))));
    }

    #[test]
    fn tabulated_planck_reproduces_drag() {
        let spec = QuadratureSpec { rel_tol: 1e-8, max_subdivisions: 50_000, ..QuadratureSpec::default() }.with_cutoff(40.0);
        let t = 1.0;
        let omega: Vec<f64> = (1..=2000).map(|k| 0.02 * k as f64).collect();
        let n: Vec<f64> = omega.iter().map(|&w| planck_occupation(w, t)).collect();
        let table = Occupation::Tabulated(OccupationTable::new(omega, n).unwrap());
        let a = drag_force(0.01, &table, &params(), &spec, DragForm::Linearized).unwrap();
        let b = drag_force(0.01, &planck(t), &params(), &spec, DragForm::Linearized).unwrap();
        assert!((a.value / b.value - 1.0).abs() < 1e-3, "{} {}", a.value, b.value);
    }

    #[test]
    fn qed3d_is_linear_and_dissipative() {
        let spec = QuadratureSpec::default();
        let p = params();
        let f1 = drag_force_qed3d(0.01, 1.0, &p, &spec).unwrap();
        let f2 = drag_force_qed3d(0.02, 1.0, &p, &spec).unwrap();
        assert!(f1.value < 0.0);
        assert!((f2.value / f1.value - 2.0).abs() < 1e-12);
        assert_eq!(drag_force_qed3d(0.0, 1.0, &p, &spec).unwrap().value, 0.0);
        assert!(drag_force_qed3d(0.01, 0.0, &p, &spec).is_err());
    }

    #[test]
    fn qed3d_matches_simplified_form() {
        // ρ − (ω/3)ρ' = −ω⁴ n'/(3π²)
        let spec = QuadratureSpec::default().with_tolerance(1e-12);
        let p = params();
        let occ = planck(1.0);
        let v = 0.01;
        let f = drag_force_qed3d(v, 1.0, &p, &spec).unwrap();
        let simple = integrate_semi_infinite(
            |w| 4.0 * v / (3.0 * PI) * w.powi(5) * alpha_imag(w, &p) * occ.dn_domega(w).unwrap(),
            &spec,
        )
        .unwrap();
        assert!((f.value / simple.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn diffusion_examples() {
        let spec = QuadratureSpec::default();
        let p = params();
        assert_eq!(diffusion_rate(&planck(0.0), &p, &spec).unwrap().value, 0.0);
        assert_eq!(diffusion_rate(&Occupation::Zero, &p, &spec).unwrap().value, 0.0);
        let r1 = diffusion_rate(&planck(1.0), &p, &spec).unwrap().value;
        let r2 = diffusion_rate(&planck(2.0), &p, &spec).unwrap().value;
        assert!(r1 > 0.0 && r2 > r1);
    }

    #[test]
    fn clamped_table_diverges() {
        let spec = QuadratureSpec::default();
        let table = Occupation::Tabulated(OccupationTable::new(vec![0.5, 1.0, 2.0], vec![1.0, 1.0, 1.0]).unwrap());
        let r = diffusion_rate(&table, &params(), &spec);
        assert!(matches!(r, Err(Error::DivergentTail { .. })), "{r:?}");
    }

    #[test]
    fn balance_vanishes_for_planck() {
        let spec = QuadratureSpec::default();
        for &t in &[0.1, 1.0, 10.0] {
            let r = balance_residual(t, &params(), &spec).unwrap();
            assert!(r.pointwise_max <= 1e-12, "T={t}: {r:?}");
            assert!(r.integrated_relative.abs() <= 1e-9, "T={t}: {r:?}");
            assert!(r.grid_points > 30);
            assert!(r.identity_max <= 1e-14, "T={t}: {r:?}");
        }
    }

    #[test]
    fn balance_fails_for_mismatched_temperatures() {
        let spec = QuadratureSpec::default();
        let r = balance_residual_mismatched(1.0, 1.1, &params(), &spec).unwrap();
        assert!(r.pointwise_max > 1e-2, "{r:?}");
    }

    #[test]
    fn balance_fails_with_wrong_damping() {
        let spec = QuadratureSpec::default();
        let wrong = params().unchecked_with_damping(0.1);
        let r = balance_residual(1.0, &wrong, &spec).unwrap();
        assert!(r.pointwise_max > 1e-2);
        assert!(r.identity_max > 1e-2);
    }

    #[test]
    fn planck_recovery_closed_endpoint() {
        let t = 0.8;
        let w0 = t * 2f64.ln();
        let spec = QuadratureSpec { rel_tol: 1e-13, abs_tol: 1e-300, ..QuadratureSpec::default() };
        let c = integrate_balance_ode(t, w0, 1.0, 2.0 * w0, &spec).unwrap();
        let (_, n) = c.last().unwrap();
        assert!((n - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn planck_recovery_over_two_decades() {
        let spec = QuadratureSpec { rel_tol: 1e-13, abs_tol: 1e-300, ..QuadratureSpec::default() };
        let c = recover_planck(1.0, 1.0, &spec).unwrap();
        assert!((c.omega[0] - 0.1).abs() < 1e-15);
        assert!((c.last().unwrap().0 - 10.0).abs() < 1e-14);
        assert!(c.omega.windows(2).all(|w| w[1] > w[0]));
        for (w, n) in c.iter() {
            assert!((n / planck_occupation(w, 1.0) - 1.0).abs() < 1e-10, "w={w}");
        }
    }

    #[test]
    fn perturbed_start_is_not_attracted() {
        let spec = QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-300, ..QuadratureSpec::default() };
        let n0 = 1.5 * planck_occupation(1.0, 1.0);
        let c = integrate_balance_ode(1.0, 1.0, n0, 10.0, &spec).unwrap();
        for (w, n) in c.iter() {
            assert!(n > planck_occupation(w, 1.0) * (1.0 + 1e-6), "w={w}");
        }
    }

    #[test]
    fn single_direction_force_grows_with_cutoff() {
        let spec = QuadratureSpec::default();
        let scan = single_direction_cutoff_scan(0.0, &planck(1.0), &params(), &[50.0, 500.0, 5000.0], &spec).unwrap();
        let d1 = scan[1].1 - scan[0].1;
        let d2 = scan[2].1 - scan[1].1;
        assert!(d1 > 0.0 && (d2 / d1 - 1.0).abs() < 0.05, "{scan:?}");
    }

    #[test]
    fn integrand_export_columns() {
        let rows = integrand_table(0.1, 1.0, &params(), &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.residual.abs() <= 1e-12 * r.integrand_diffusion));
        assert!(rows.iter().all(|r| r.integrand_drag < 0.0));
    }

    #[test]
    fn sweep_keeps_order() {
        let spec = QuadratureSpec::default();
        let vs = [0.1, 0.2, 0.3];
        let out = drag_sweep(&vs, &planck(1.0), &params(), &spec, DragForm::ExactDifference);
        let serial: Vec<f64> = vs
            .iter()
            .map(|&v| drag_force(v, &planck(1.0), &params(), &spec, DragForm::ExactDifference).unwrap().value)
            .collect();
        for (a, b) in out.iter().zip(&serial) {
            assert_eq!(a.as_ref().unwrap().value, *b);
        }
    }
}
