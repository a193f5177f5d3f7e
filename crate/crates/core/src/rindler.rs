//! Uniformly accelerated motion: trajectory, the ξ/η Doppler kernels,
//! correlator weights, the proper-time diffusion rate and drag.
//!
//! With `y = Ω/a` the kernels are
//! `ξ = (1/a)Γ(iy)(ω/a)^{−iy}e^{−πy/2}` and `η` the same with `e^{+πy/2}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numerics::{log_gamma_complex, ComplexValue, QuadratureSpec, TailPolicy};
use crate::response::{alpha_abs_sq, alpha_imag, OscillatorParams};
use crate::spectral::{planck_occupation, transformed_spectral_density, BoostParams, Occupation};
use crate::thermal_kinetics::{diffusion_rate, integrate_recorded, KineticsResult};

/// Proper acceleration and the matching Davies–Unruh temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerParams {
    a: f64,
    t_du: f64,
}

impl RindlerParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid(format!("acceleration must be > 0, got {a}")));
        }
        Ok(RindlerParams { a, t_du: a / (2.0 * PI) })
    }

    /// The acceleration whose Unruh temperature is `t`.
    pub fn from_temperature(t: f64) -> Result<Self> {
        Self::new(2.0 * PI * t)
    }

    pub fn acceleration(&self) -> f64 {
        self.a
    }

    pub fn unruh_temperature(&self) -> f64 {
        self.t_du
    }
}

/// `(t, y) = (sinh(aτ)/a, cosh(aτ)/a)`.
pub fn trajectory(tau: f64, r: &RindlerParams) -> (f64, f64) {
    let x = r.a * tau;
    (x.sinh() / r.a, x.cosh() / r.a)
}

/// `ω(t + y)` along the trajectory, i.e. `(ω/a)e^{aτ}`.
pub fn light_cone_phase(omega: f64, tau: f64, r: &RindlerParams) -> f64 {
    omega / r.a * (r.a * tau).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Xi,
    Eta,
}

/// Closed form of ξ or η.
pub fn xi_eta_closed_form(omega: f64, proper_omega: f64, r: &RindlerParams, which: Kernel) -> Result<ComplexValue> {
    if !(omega > 0.0 && proper_omega > 0.0) {
        return Err(invalid(format!("need omega, Omega > 0; got {omega}, {proper_omega}")));
    }
    let y = proper_omega / r.a;
    let u = omega / r.a;
    let damp = match which {
        Kernel::Xi => -0.5 * PI * y,
        Kernel::Eta => 0.5 * PI * y,
    };
    let lg = log_gamma_complex(ComplexValue::new(0.0, y))?;
    let expo = lg + ComplexValue::new(damp, -y * u.ln());
    Ok(expo.exp() / r.a)
}

/// Both sides of `|Γ(iy)|⁴ = (π²/y²)/sinh²(πy)`, plus the exponential form
/// of the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaIdentity {
    pub lhs: f64,
    pub rhs_sinh: f64,
    pub rhs_exp: f64,
}

impl GammaIdentity {
    pub fn residual(&self) -> f64 {
        self.lhs / self.rhs_sinh - 1.0
    }
}

pub fn gamma_identity(proper_omega: f64, r: &RindlerParams) -> Result<GammaIdentity> {
    if !(proper_omega > 0.0) {
        return Err(invalid(format!("Omega must be > 0, got {proper_omega}")));
    }
    let y = proper_omega / r.a;
    let lhs = (4.0 * log_gamma_complex(ComplexValue::new(0.0, y))?.re).exp();
    let pref = PI * PI / (y * y);
    let s = (PI * y).sinh();
    let q = (-2.0 * PI * y).exp();
    let d = -(-2.0 * PI * y).exp_m1();
    Ok(GammaIdentity {
        lhs,
        rhs_sinh: pref / (s * s),
        rhs_exp: pref * 4.0 * q / (d * d),
    })
}

/// Coefficients of `δ(Ω₁ − Ω₃)` in `⟨g g†⟩` and `⟨g† g⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatorWeights {
    pub w_gg_dag: f64,
    pub w_g_dag_g: f64,
}

impl CorrelatorWeights {
    /// `e^{2πΩ/a}` up to rounding. Above `Ω/a ≈ 110` the ratio overflows
    /// and `w_gg_dag` drops out of the normal range.
    pub fn kms_ratio(&self) -> f64 {
        self.w_g_dag_g / self.w_gg_dag
    }
}

/// `(1/2πa)|Γ(iΩ/a)|²e^{∓πΩ/a}`.
pub fn correlator_weights(proper_omega: f64, r: &RindlerParams) -> Result<CorrelatorWeights> {
    if !(proper_omega > 0.0) {
        return Err(invalid(format!("Omega must be > 0, got {proper_omega}")));
    }
    let y = proper_omega / r.a;
    let ln_abs_sq = 2.0 * log_gamma_complex(ComplexValue::new(0.0, y))?.re;
    let pref = 1.0 / (2.0 * PI * r.a);
    Ok(CorrelatorWeights {
        w_gg_dag: pref * (ln_abs_sq - PI * y).exp(),
        w_g_dag_g: pref * (ln_abs_sq + PI * y).exp(),
    })
}

/// Diffusion rate in proper time, evaluated two independent ways.
#[derive(Debug, Clone, PartialEq)]
pub struct RindlerDiffusion {
    /// From the product of correlator weights (`|Γ|⁴`), with the factor 2
    /// for counter-propagating modes.
    pub route_a: KineticsResult,
    /// Thermal diffusion rate with a Planck occupation at `T_DU`.
    pub route_b: KineticsResult,
}

impl RindlerDiffusion {
    pub fn relative_difference(&self) -> f64 {
        (self.route_a.value - self.route_b.value).abs() / self.route_b.value.abs().max(f64::MIN_POSITIVE)
    }
}

// below this y the route-A integrand is under 1e-30 of its peak
const SMALL_Y: f64 = 1e-9;

/// Route-A integrand `2·4·2π Ω⁶|α|² w_gg†(Ω) w_g†g(Ω)`.
pub fn route_a_integrand(proper_omega: f64, r: &RindlerParams, p: &OscillatorParams) -> f64 {
    if proper_omega / r.a < SMALL_Y {
        return 0.0;
    }
    match correlator_weights(proper_omega, r) {
        Ok(w) => 16.0 * PI * proper_omega.powi(6) * alpha_abs_sq(proper_omega, p) * w.w_gg_dag * w.w_g_dag_g,
        Err(_) => 0.0,
    }
}

pub fn rindler_diffusion_rate(r: &RindlerParams, p: &OscillatorParams, spec: &QuadratureSpec) -> Result<RindlerDiffusion> {
    let route_a = integrate_recorded(|w| route_a_integrand(w, r, p), spec, false)?;
    let route_b = diffusion_rate(&Occupation::planck(r.t_du)?, p, spec)?;
    Ok(RindlerDiffusion { route_a, route_b })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RindlerDragForm {
    /// `∫₀^{ω_max} Ω²α_I coth(πΩ/a) dΩ` for a particle at rest in the
    /// accelerated frame. Log-divergent; the cutoff comes from a
    /// [`TailPolicy::Fixed`] spec.
    CothTotal,
    /// `4v∫ω³α_I ∂n/∂ω dω` with `n` at `T_DU`.
    NetLinearized,
}

pub fn coth_total_integrand(proper_omega: f64, r: &RindlerParams, p: &OscillatorParams) -> f64 {
    if proper_omega == 0.0 {
        return 0.0;
    }
    let x = PI * proper_omega / r.a;
    proper_omega * proper_omega * alpha_imag(proper_omega, p) / x.tanh()
}

pub fn rindler_drag(
    v: f64,
    r: &RindlerParams,
    p: &OscillatorParams,
    spec: &QuadratureSpec,
    form: RindlerDragForm,
) -> Result<KineticsResult> {
    BoostParams::new(v)?;
    match form {
        RindlerDragForm::CothTotal => {
            if !matches!(spec.tail_policy, TailPolicy::Fixed { .. }) {
                return Err(Error::CutoffRequired);
            }
            integrate_recorded(|w| coth_total_integrand(w, r, p), spec, false)
        }
        RindlerDragForm::NetLinearized => {
            let t = r.t_du;
            integrate_recorded(
                |w| {
                    let n = planck_occupation(w, t);
                    -4.0 * v * w.powi(3) * alpha_imag(w, p) * (n * n + n) / t
                },
                spec,
                false,
            )
        }
    }
}

/// Field spectrum seen by a particle moving with `v` relative to the
/// accelerated frame, modelled as a boosted Planck spectrum at `T_DU`.
pub fn moving_spectral_density(omega_prime: f64, v: f64, r: &RindlerParams) -> Result<f64> {
    let boost = BoostParams::new(v)?;
    Ok(transformed_spectral_density(omega_prime, &Occupation::planck(r.t_du)?, &boost))
}

/// One row of the spectrum export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub w_gg_dag: f64,
    pub w_g_dag_g: f64,
    pub kms_ratio: f64,
    pub gamma_identity_residual: f64,
}

pub fn spectrum_table(r: &RindlerParams, omegas: &[f64]) -> Result<Vec<SpectrumRow>> {
    omegas
        .iter()
        .map(|&w| {
            let cw = correlator_weights(w, r)?;
            let gi = gamma_identity(w, r)?;
            Ok(SpectrumRow {
                omega: w,
                w_gg_dag: cw.w_gg_dag,
                w_g_dag_g: cw.w_g_dag_g,
                kms_ratio: cw.kms_ratio(),
                gamma_identity_residual: gi.residual(),
            })
        })
        .collect()
}
