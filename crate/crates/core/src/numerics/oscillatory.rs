//! Regularized chirped-phase integrals
//! `∫ dτ e^{iΩτ} e^{±i(ω/a) e^{aτ}}` over the whole real line.
//!
//! Everything is evaluated in the dimensionless variables `t = aτ`,
//! `u = ω/a`, `y = Ω/a` and the result is scaled by `1/a` at the end.
//!
//! * `t < 0`: the integrand tends to the free phase `e^{iyt}`. That piece is
//!   integrated in closed form (Abel limit `−i/y`) and the remainder
//!   `e^{iyt}(e^{±iue^t} − 1)` decays like `e^t`.
//! * `t > 0`: damped by `e^{−εt}`, mapped to `z = e^t`, summed over
//!   half-periods of `e^{±iuz}` and accelerated with Wynn's epsilon algorithm.
//!
//! The damped values are extrapolated to `ε → 0` with Neville's scheme.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numerics::quadrature::integrate_adaptive;
use crate::numerics::{ComplexValue, QuadratureSpec};

/// Sign of the chirped phase: `+1` gives the ξ kernel, `−1` the η kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    Positive,
    Negative,
}

impl PhaseSign {
    pub fn value(self) -> f64 {
        match self {
            PhaseSign::Positive => 1.0,
            PhaseSign::Negative => -1.0,
        }
    }
}

/// Full record of one regularized evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTrace {
    /// Damping rates actually used (absolute units, i.e. already times `a`).
    pub epsilons: Vec<f64>,
    /// Damped integral at each rung.
    pub damped: Vec<ComplexValue>,
    /// Extrapolant to `ε = 0` built from the first `k + 1` rungs.
    pub extrapolants: Vec<ComplexValue>,
    pub value: ComplexValue,
    /// `|last extrapolant − previous|`.
    pub error_estimate: f64,
}

const LOWER_CUTOFF_LN: f64 = -41.5; // u·e^t below 1e-18
const MAX_HALF_PERIODS: usize = 400;

/// `∫_{−∞}^{∞} dτ e^{iΩτ} e^{± i(ω/a) e^{aτ}}`, regularized and extrapolated.
pub fn oscillatory_phase_integral(
    omega: f64,
    proper_omega: f64,
    accel: f64,
    sign: PhaseSign,
    spec: &QuadratureSpec,
) -> Result<ComplexValue> {
    oscillatory_phase_trace(omega, proper_omega, accel, sign, spec).map(|t| t.value)
}

/// Same as [`oscillatory_phase_integral`] but returns every rung of the ladder.
pub fn oscillatory_phase_trace(
    omega: f64,
    proper_omega: f64,
    accel: f64,
    sign: PhaseSign,
    spec: &QuadratureSpec,
) -> Result<LadderTrace> {
    spec.validate()?;
    if !(omega > 0.0 && proper_omega > 0.0 && accel > 0.0) {
        return Err(invalid(format!(
            "need omega, Omega, a > 0; got {omega}, {proper_omega}, {accel}"
        )));
    }
    let u = omega / accel;
    let y = proper_omega / accel;
    let s = sign.value();
    let tol = (spec.rel_tol * 1e-2).max(1e-14);

    let lower = lower_side(u, y, s, tol, spec.max_subdivisions)?;
    let damped = spec
        .epsilon_ladder
        .iter()
        .map(|&e| upper_side(u, y, s, e, None, tol, spec.max_subdivisions).map(|v| v + lower))
        .collect::<Result<Vec<_>>>()?;

    let scale = damped.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let extrapolants: Vec<ComplexValue> = (1..=damped.len())
        .map(|k| neville_at_zero(&spec.epsilon_ladder[..k], &damped[..k]))
        .collect();
    let value = *extrapolants.last().expect("ladder is non-empty");
    let steps: Vec<f64> = extrapolants.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let error_estimate = steps.last().copied().unwrap_or(0.0);
    check_cauchy(&steps, value.norm(), scale, spec)?;

    let inv_a = 1.0 / accel;
    Ok(LadderTrace {
        epsilons: spec.epsilon_ladder.iter().map(|e| e * accel).collect(),
        damped: damped.iter().map(|v| v * inv_a).collect(),
        extrapolants: extrapolants.iter().map(|v| v * inv_a).collect(),
        value: value * inv_a,
        error_estimate: error_estimate * inv_a,
    })
}

/// Successive extrapolant differences must shrink until they hit roundoff,
/// and the final one must be within tolerance.
fn check_cauchy(steps: &[f64], value: f64, scale: f64, spec: &QuadratureSpec) -> Result<()> {
    let floor = 1e-12 * scale.max(value);
    for w in steps.windows(2) {
        if w[1] > w[0] && w[1] > floor {
            return Err(Error::ExtrapolationUnstable { last_step: w[1] });
        }
    }
    if let Some(&last) = steps.last() {
        if last > (spec.rel_tol * value).max(floor) {
            return Err(Error::ExtrapolationUnstable { last_step: last });
        }
    }
    Ok(())
}

/// `∫_{−∞}^0 e^{iyt}(e^{iσue^t} − 1) dt + 1/(iy)`.
fn lower_side(u: f64, y: f64, sign: f64, tol: f64, max_sub: usize) -> Result<ComplexValue> {
    let t_min = LOWER_CUTOFF_LN - u.ln();
    let f = |t: f64| {
        let x = sign * u * t.exp();
        let half = (0.5 * x).sin();
        // e^{ix} − 1 without cancellation
        let em1 = Complex64::new(-2.0 * half * half, x.sin());
        Complex64::from_polar(1.0, y * t) * em1
    };
    // split into pieces no longer than a couple of oscillations
    let n = (((-t_min) * y / PI).ceil() as usize).max(4);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let a = t_min + (-t_min) * k as f64 / n as f64;
        let b = t_min + (-t_min) * (k + 1) as f64 / n as f64;
        let (v, _) = integrate_adaptive(f, a, b, tol, tol * 1e-3, max_sub)?;
        sum += v;
    }
    Ok(sum + Complex64::new(0.0, -1.0 / y))
}

/// `∫_1^Z z^{iy − e − 1} e^{iσuz} dz`, with `Z = ∞` unless `upper` is given.
pub(crate) fn upper_side(
    u: f64,
    y: f64,
    sign: f64,
    e: f64,
    upper: Option<f64>,
    tol: f64,
    max_sub: usize,
) -> Result<ComplexValue> {
    let expo = Complex64::new(-1.0 - e, y);
    let f = |z: f64| (expo * z.ln()).exp() * Complex64::from_polar(1.0, sign * u * z);
    let half_period = PI / u;
    // Past this point the phase derivative y/z + σu has a fixed sign.
    let z_head = 1.0 + (4.0 * y / u / half_period).ceil() * half_period;

    if let Some(z_max) = upper {
        let n = (((z_max - 1.0) / half_period).ceil() as usize).max(1);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let a = 1.0 + (z_max - 1.0) * k as f64 / n as f64;
            let b = 1.0 + (z_max - 1.0) * (k + 1) as f64 / n as f64;
            let (v, _) = integrate_adaptive(f, a, b, tol, tol * 1e-3, max_sub)?;
            sum += v;
        }
        return Ok(sum);
    }

    let mut head = Complex64::new(0.0, 0.0);
    let mut z = 1.0;
    while z < z_head - 0.5 * half_period {
        let (v, _) = integrate_adaptive(f, z, z + half_period, tol, tol * 1e-3, max_sub)?;
        head += v;
        z += half_period;
    }
    let mut partial = Vec::with_capacity(64);
    let mut running = head;
    let mut wynn = Wynn::default();
    let mut last_estimate: Option<Complex64> = None;
    let mut stable = 0;
    for _ in 0..MAX_HALF_PERIODS {
        let (v, _) = integrate_adaptive(f, z, z + half_period, tol, tol * 1e-3, max_sub)?;
        z += half_period;
        running += v;
        partial.push(running);
        let est = wynn.push(running);
        if let Some(prev) = last_estimate {
            let diff = (est - prev).norm();
            if diff <= 1e-15 * est.norm().max(1.0) + tol * 1e-2 {
                stable += 1;
                if stable >= 3 && partial.len() >= 12 {
                    return Ok(est);
                }
            } else {
                stable = 0;
            }
        }
        last_estimate = Some(est);
    }
    Err(Error::NonConvergence {
        budget: MAX_HALF_PERIODS,
        error: 0.0,
    })
}

/// Incremental Wynn epsilon table over complex partial sums.
#[derive(Debug, Default)]
struct Wynn {
    // last anti-diagonal of the epsilon table
    diag: Vec<Complex64>,
}

impl Wynn {
    fn push(&mut self, s: Complex64) -> Complex64 {
        let mut new_diag = Vec::with_capacity(self.diag.len() + 1);
        new_diag.push(s);
        let zero = Complex64::new(0.0, 0.0);
        for j in 0..self.diag.len() {
            let before = if j == 0 { zero } else { self.diag[j - 1] };
            let delta = new_diag[j] - self.diag[j];
            let next = if delta.norm() == 0.0 {
                // column converged; propagate
                new_diag[j]
            } else {
                before + delta.inv()
            };
            new_diag.push(next);
        }
        self.diag = new_diag;
        // even columns carry the estimates; take the deepest one
        let last_even = (self.diag.len() - 1) & !1;
        self.diag[last_even]
    }
}

/// Value at `ε = 0` of the interpolating polynomial through `(xs, ys)`.
pub fn neville_at_zero(xs: &[f64], ys: &[ComplexValue]) -> ComplexValue {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (p[i] * (-xs[i + k]) + p[i + 1] * xs[i]) / (xs[i] - xs[i + k]);
        }
    }
    p[0]
}
