//! Brute-force checks on a finite box of field modes.
//!
//! Modes are `k_j = 2πj/L`, `j = ±1..±N`, with `ω_j = |k_j|` and
//! `C_j² = 2π/(ω_j L)`. All sums run over the positive half and multiply by
//! the sign multiplicity, since every summand depends on `|k|` only.

mod radiation;
mod variance;
mod windowed;

pub use radiation::{rr_kernel_check, transfer_function_check, RrCheck, TransferCheck, VelocityProbe};
pub use variance::{
    discrete_variance, finite_time_kernel, ols_slope, variance_curve, VarianceCurve, VarianceEvaluator,
    DEFAULT_FIT_WINDOW,
};
pub use windowed::{windowed_xi_check, WindowedCheck};

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Box of length `L` holding `N` positive-`k` modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGrid {
    length: f64,
    modes: usize,
}

impl ModeGrid {
    pub fn new(length: f64, modes: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid(format!("box length must be > 0, got {length}")));
        }
        if modes == 0 {
            return Err(invalid("need at least one mode"));
        }
        Ok(ModeGrid { length, modes })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// `2π/L`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// `ω_j` for `j = 1..=N`.
    pub fn omega(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    pub fn omega_max(&self) -> f64 {
        self.omega(self.modes)
    }

    /// `C_j² = 2π/(ω_j L)`.
    pub fn c_squared(&self, omega: f64) -> f64 {
        2.0 * PI / (omega * self.length)
    }

    /// Both mode counts and box length doubled.
    pub fn doubled(&self) -> Self {
        ModeGrid { length: 2.0 * self.length, modes: 2 * self.modes }
    }

    /// Mode density and bandwidth both doubled (`2L`, `4N`).
    pub fn continuum_refined(&self) -> Self {
        ModeGrid { length: 2.0 * self.length, modes: 4 * self.modes }
    }

    /// Default grid for [`rr_kernel_check`]: `L = 400`, `N = 4000`.
    pub fn rr_default() -> Self {
        ModeGrid { length: 400.0, modes: 4000 }
    }

    /// Errors unless the spacing resolves a resonance of half-width `beta`.
    pub fn check_resolves(&self, beta: f64) -> Result<()> {
        if self.spacing() > beta {
            return Err(Error::GridTooCoarse { spacing: self.spacing(), damping: beta });
        }
        Ok(())
    }
}
