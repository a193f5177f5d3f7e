//! The ξ kernel from a finite proper-time window.
//!
//! In `t = aτ` the window `[−X, X]` is integrated numerically, the upper
//! half with the same `ε` damping and extrapolation as the full-line
//! routine. The pieces outside the window are added in leading order:
//! the first two Taylor terms of `e^{iue^t}` below `−X` and the first
//! integration-by-parts boundary term above `X`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numerics::{chirp_upper_side, integrate_adaptive, neville_at_zero, ComplexValue, QuadratureSpec};
use crate::rindler::{xi_eta_closed_form, Kernel, RindlerParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedCheck {
    pub numeric: ComplexValue,
    pub closed: ComplexValue,
    /// `|numeric − closed| / |closed|`.
    pub deviation: f64,
    /// `arg(numeric / closed)`.
    pub phase_error: f64,
}

pub fn windowed_xi_check(
    omega: f64,
    proper_omega: f64,
    r: &RindlerParams,
    t_window: f64,
    spec: &QuadratureSpec,
) -> Result<WindowedCheck> {
    spec.validate()?;
    if !(t_window > 0.0) {
        return Err(invalid(format!("window must be > 0, got {t_window}")));
    }
    let closed = xi_eta_closed_form(omega, proper_omega, r, Kernel::Xi)?;
    let a = r.acceleration();
    let u = omega / a;
    let y = proper_omega / a;
    let x = a * t_window;
    let tol = (spec.rel_tol * 1e-2).max(1e-14);
    let iu = Complex64::new(0.0, u);

    // [−X, 0]
    let f = |t: f64| Complex64::from_polar(1.0, y * t + u * t.exp());
    let pieces = ((x * y.max(u) / PI).ceil() as usize).max(4);
    let mut lower = Complex64::new(0.0, 0.0);
    for k in 0..pieces {
        let lo = -x + x * k as f64 / pieces as f64;
        let hi = -x + x * (k + 1) as f64 / pieces as f64;
        lower += integrate_adaptive(f, lo, hi, tol, tol * 1e-3, spec.max_subdivisions)?.0;
    }

    // [0, X] with damping, extrapolated to ε = 0
    let z_max = x.exp();
    let damped = spec
        .epsilon_ladder
        .iter()
        .map(|&e| chirp_upper_side(u, y, 1.0, e, Some(z_max), tol, spec.max_subdivisions))
        .collect::<Result<Vec<_>>>()?;
    let upper = neville_at_zero(&spec.epsilon_ladder, &damped);
    if damped.len() > 1 {
        let prev = neville_at_zero(&spec.epsilon_ladder[..damped.len() - 1], &damped[..damped.len() - 1]);
        let step = (upper - prev).norm();
        if step > (spec.rel_tol * upper.norm()).max(1e-12) {
            return Err(Error::ExtrapolationUnstable { last_step: step });
        }
    }

    // below −X: ∫ e^{iyt}(1 + iue^t) dt
    let s0 = Complex64::new(0.0, y);
    let s1 = Complex64::new(1.0, y);
    let lower_tail = (-s0 * x).exp() / s0 + iu * (-s1 * x).exp() / s1;
    // above X (z > Z): −z^{iy−1}e^{iuz}/(iu) at Z
    let upper_tail = -(Complex64::new(-1.0, y) * x).exp() * Complex64::from_polar(1.0, u * z_max) / iu;

    let numeric = (lower_tail + lower + upper + upper_tail) / a;
    let ratio = numeric / closed;
    Ok(WindowedCheck {
        numeric,
        closed,
        deviation: (numeric - closed).norm() / closed.norm(),
        phase_error: ratio.arg(),
    })
}
