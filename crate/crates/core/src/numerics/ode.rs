//! Dormand–Prince 5(4) integration with step-size control.

use crate::error::{invalid, Error, Result};
use crate::numerics::QuadratureSpec;

/// A sampled solution: independent variable and state at every accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution<const N: usize> {
    pub x: Vec<f64>,
    pub y: Vec<[f64; N]>,
}

/// Scalar solution curve `n(ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.omega.last()?, *self.values.last()?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega.iter().copied().zip(self.values.iter().copied())
    }
}

// Dormand–Prince tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;
const LOCAL_SAFETY: f64 = 0.1;

/// Integrates `y' = rhs(x, y)` from `x_start` to `x_end` (either direction).
///
/// The local error of every accepted step satisfies
/// `|err_i| <= (abs_tol + rel_tol·max(|y_i|, |y_i_new|)) / 10`; the factor
/// keeps the accumulated endpoint error below the requested tolerance.
pub fn solve_ode_system<const N: usize, F>(
    rhs: F,
    x_start: f64,
    y_start: [f64; N],
    x_end: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<OdeSolution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(x_start.is_finite() && x_end.is_finite()) {
        return Err(invalid("ODE bounds must be finite"));
    }
    let mut sol = OdeSolution { x: vec![x_start], y: vec![y_start] };
    if x_start == x_end {
        return Ok(sol);
    }
    let rel_tol = rel_tol * LOCAL_SAFETY;
    let abs_tol = abs_tol * LOCAL_SAFETY;
    let dir = (x_end - x_start).signum();
    let span = (x_end - x_start).abs();
    let min_step = 1e-14 * x_start.abs().max(f64::MIN_POSITIVE);

    let mut x = x_start;
    let mut y = y_start;
    let mut k1 = rhs(x, &y);
    let mut h = initial_step(&k1, &y, span, rel_tol, abs_tol);
    let mut steps = 0;
    while (x_end - x) * dir > 0.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NonConvergence { budget: MAX_STEPS, error: h });
        }
        let last = h >= (x_end - x).abs();
        if last {
            h = (x_end - x).abs();
        }
        let hs = h * dir;
        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += hs * a * kj[i];
                    }
                }
            }
            k[s] = rhs(x + C[s] * hs, &ys);
        }
        let mut y_new = y;
        let mut err_norm: f64 = 0.0;
        for i in 0..N {
            let mut high = 0.0;
            let mut diff = 0.0;
            for s in 0..7 {
                high += B5[s] * k[s][i];
                diff += (B5[s] - B4[s]) * k[s][i];
            }
            y_new[i] = y[i] + hs * high;
            let scale = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
            err_norm = err_norm.max((hs * diff).abs() / scale);
        }
        if !err_norm.is_finite() {
            err_norm = f64::INFINITY;
        }
        if err_norm <= 1.0 {
            x = if last { x_end } else { x + hs };
            y = y_new;
            // first-same-as-last: stage 7 is the derivative at the new point
            k1 = k[6];
            sol.x.push(x);
            sol.y.push(y);
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= if err_norm <= 1.0 { factor } else { factor.min(1.0) };
        if h < min_step && (x_end - x) * dir > 0.0 {
            return Err(Error::StepUnderflow { step: h, omega: x });
        }
    }
    Ok(sol)
}

fn initial_step<const N: usize>(f0: &[f64; N], y0: &[f64; N], span: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for i in 0..N {
        let sc = abs_tol + rel_tol * y0[i].abs();
        d0 = d0.max(y0[i].abs() / sc);
        d1 = d1.max(f0[i].abs() / sc);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span)
}

/// Scalar `dn/dω = rhs(ω, n)` from `(ω_start, n_start)` to `ω_end`.
///
/// Uses `spec.rel_tol` and `spec.abs_tol` for step control.
pub fn solve_scalar_ode<F>(
    rhs: F,
    omega_start: f64,
    n_start: f64,
    omega_end: f64,
    spec: &QuadratureSpec,
) -> Result<SampledCurve>
where
    F: Fn(f64, f64) -> f64,
{
    spec.validate()?;
    if !(omega_start > 0.0) {
        return Err(invalid(format!("omega_start must be > 0, got {omega_start}")));
    }
    if !(n_start > 0.0) {
        return Err(invalid(format!("n_start must be > 0, got {n_start}")));
    }
    let sol = solve_ode_system(
        |w, y: &[f64; 1]| [rhs(w, y[0])],
        omega_start,
        [n_start],
        omega_end,
        spec.rel_tol,
        spec.abs_tol,
    )?;
    Ok(SampledCurve {
        omega: sol.x,
        values: sol.y.into_iter().map(|v| v[0]).collect(),
    })
}
