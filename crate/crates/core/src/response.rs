//! Oscillator parameters and the polarizability `α(ω)`.
//!
//! The radiation-reaction damping `β = πe²/m` is always derived from the
//! charge and mass. With that value `|α|² = α_I/(2πω)` holds identically,
//! and both the power balance and the Unruh equivalence rely on it.
//!
//! The particle mass `M` is carried for completeness. The power balance in
//! [`crate::thermal_kinetics`] uses the oscillator mass `m` in the kinetic
//! energy, although the centre-of-mass momentum is conjugate to `Y`, whose
//! mass is `M`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::numerics::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    charge: f64,
    mass: f64,
    particle_mass: f64,
    omega0: f64,
    beta: f64,
}

impl OscillatorParams {
    pub fn new(charge: f64, mass: f64, particle_mass: f64, omega0: f64) -> Result<Self> {
        if !(charge != 0.0 && charge.is_finite()) {
            return Err(invalid(format!("charge must be non-zero, got {charge}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(invalid(format!("oscillator mass must be > 0, got {mass}")));
        }
        if !(particle_mass > 0.0 && particle_mass.is_finite()) {
            return Err(invalid(format!("particle mass must be > 0, got {particle_mass}")));
        }
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(invalid(format!("omega0 must be > 0, got {omega0}")));
        }
        Ok(OscillatorParams {
            charge,
            mass,
            particle_mass,
            omega0,
            beta: PI * charge * charge / mass,
        })
    }

    /// Parameters with a prescribed damping; `e` is chosen so that
    /// `πe²/m = beta` with `m = 1`.
    pub fn from_damping(beta: f64, omega0: f64, particle_mass: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(invalid(format!("beta must be > 0, got {beta}")));
        }
        Self::new((beta / PI).sqrt(), 1.0, particle_mass, omega0)
    }

    /// `ω₀ = 1`, `β = 0.05`, `m = 1`, `M = 1000 m`.
    pub fn default_dimensionless() -> Self {
        Self::from_damping(0.05, 1.0, 1000.0).expect("default parameters are valid")
    }

    /// Test-harness constructor that overrides the derived damping.
    ///
    /// Breaks `|α|² = α_I/(2πω)`; only use it to show that the identity (and
    /// everything built on it) depends on `β = πe²/m`.
    pub fn unchecked_with_damping(self, beta: f64) -> Self {
        OscillatorParams { beta, ..self }
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn particle_mass(&self) -> f64 {
        self.particle_mass
    }
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `e²/m`.
    pub fn coupling(&self) -> f64 {
        self.charge * self.charge / self.mass
    }
}

/// `α(ω) = (e²/m) / (ω₀² − ω² − 2iβω)`.
pub fn polarizability(omega: f64, p: &OscillatorParams) -> ComplexValue {
    let den = Complex64::new(p.omega0 * p.omega0 - omega * omega, -2.0 * p.beta * omega);
    p.coupling() / den
}

/// `Im α(ω)`, written out to keep full relative precision off resonance.
pub fn alpha_imag(omega: f64, p: &OscillatorParams) -> f64 {
    let d = p.omega0 * p.omega0 - omega * omega;
    let g = 2.0 * p.beta * omega;
    p.coupling() * g / (d * d + g * g)
}

/// `|α(ω)|²`.
pub fn alpha_abs_sq(omega: f64, p: &OscillatorParams) -> f64 {
    let d = p.omega0 * p.omega0 - omega * omega;
    let g = 2.0 * p.beta * omega;
    let c = p.coupling();
    c * c / (d * d + g * g)
}

/// `|α(ω)|² − α_I(ω)/(2πω)`; vanishes to rounding when `β = πe²/m`.
pub fn alpha_identity_residual(omega: f64, p: &OscillatorParams) -> f64 {
    let alpha = polarizability(omega, p);
    alpha.norm_sqr() - alpha.im / (2.0 * PI * omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn static_limit_is_real() {
        let p = OscillatorParams::default_dimensionless();
        let a = polarizability(0.0, &p);
        assert_eq!(a.im, 0.0);
        assert!((a.re - p.coupling() / (p.omega0() * p.omega0())).abs() < 1e-16);
    }

    #[test]
    fn resonance_is_imaginary() {
        let p = OscillatorParams::default_dimensionless();
        let a = polarizability(p.omega0(), &p);
        assert!(a.re.abs() < 1e-16);
        assert!((a.im - 1.0 / (2.0 * PI * p.omega0())).abs() < 1e-15);
    }

    #[test]
    fn high_frequency_falloff() {
        let p = OscillatorParams::default_dimensionless();
        let w = 1e4;
        let a = polarizability(w, &p);
        assert!((a.norm() * w * w / p.coupling() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn default_parameters() {
        let p = OscillatorParams::default_dimensionless();
        assert!((p.beta() - 0.05).abs() < 1e-16);
        assert!((p.coupling() - 0.05 / PI).abs() < 1e-17);
        assert_eq!(p.particle_mass(), 1000.0 * p.mass());
    }

    #[test]
    fn identity_at_resonance() {
        let p = OscillatorParams::default_dimensionless();
        let a2 = polarizability(1.0, &p).norm_sqr();
        assert!(alpha_identity_residual(1.0, &p).abs() <= 1e-14 * a2);
    }

    #[test]
    fn identity_fails_with_wrong_damping() {
        let p = OscillatorParams::default_dimensionless();
        let wrong = p.unchecked_with_damping(2.0 * p.beta());
        let a2 = polarizability(1.0, &wrong).norm_sqr();
        assert!(alpha_identity_residual(1.0, &wrong).abs() > 0.1 * a2);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(OscillatorParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn explicit_forms_match_complex_division() {
        let p = OscillatorParams::new(0.3, 2.0, 10.0, 1.7).unwrap();
        for k in 1..500 {
            let w = 0.02 * k as f64;
            let a = polarizability(w, &p);
            assert!(((alpha_imag(w, &p) - a.im) / a.im).abs() < 1e-14);
            assert!(((alpha_abs_sq(w, &p) - a.norm_sqr()) / a.norm_sqr()).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn identity_holds_everywhere(w in 0.01f64..100.0, e in 0.01f64..1.0, m in 0.1f64..10.0) {
            let p = OscillatorParams::new(e, m, 1.0, 1.0).unwrap();
            let a2 = polarizability(w, &p).norm_sqr();
            prop_assert!(alpha_identity_residual(w, &p).abs() <= 1e-14 * a2);
        }

        #[test]
        fn absorptive_part_is_positive(w in 1e-6f64..1e3) {
            let p = OscillatorParams::default_dimensionless();
            prop_assert!(polarizability(w, &p).im > 0.0);
        }

        #[test]
        fn crossing_symmetry(w in 0.0f64..50.0) {
            let p = OscillatorParams::default_dimensionless();
            let a = polarizability(w, &p);
            let b = polarizability(-w, &p);
            prop_assert!((b - a.conj()).norm() <= 1e-15 * a.norm());
        }
    }
}
