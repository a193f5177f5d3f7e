//! Scalar-QED model of a polarizable particle coupled to a 1+1D massless
//! scalar field.
//!
//! Natural units throughout: `ħ = c = k_B = 1`, and frequencies are measured
//! in units of the oscillator resonance `ω₀`.
//!
//! * [`numerics`]: log-Gamma, quadrature, chirped-phase integrals, ODEs.
//! * [`spectral`]: occupations, spectral energy density, Doppler transforms.
//! * [`response`]: oscillator parameters and polarizability.
//! * [`thermal_kinetics`]: drag, momentum diffusion and power balance in a
//!   thermal field.
//! * [`rindler`]: hyperbolic motion, Doppler kernels, correlator weights and
//!   the Davies–Unruh temperature.
//! * [`oracle`]: brute-force finite-box checks of the continuum formulas.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numerics;
pub mod oracle;
pub mod response;
pub mod rindler;
pub mod spectral;
pub mod thermal_kinetics;

pub use error::{Error, Result};
pub use numerics::{ComplexValue, QuadratureSpec, TailPolicy};
pub use response::OscillatorParams;
pub use rindler::RindlerParams;
pub use spectral::{BoostParams, Occupation};
pub use thermal_kinetics::KineticsResult;
