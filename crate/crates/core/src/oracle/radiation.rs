//! Radiation reaction from the mode sum, and the driven steady state.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::ModeGrid;
use crate::error::{invalid, Error, Result};
use crate::numerics::{solve_ode_system, ComplexValue};
use crate::response::{polarizability, OscillatorParams};

/// Test velocity `ẋ(τ) = A sin(fτ) exp(−(τ − c)²/2w²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityProbe {
    pub amplitude: f64,
    pub frequency: f64,
    pub center: f64,
    pub width: f64,
}

impl Default for VelocityProbe {
    fn default() -> Self {
        VelocityProbe { amplitude: 1.0, frequency: 1.0, center: 30.0, width: 5.0 }
    }
}

impl VelocityProbe {
    pub fn velocity(&self, tau: f64) -> f64 {
        let s = (tau - self.center) / self.width;
        self.amplitude * (self.frequency * tau).sin() * (-0.5 * s * s).exp()
    }

    /// Highest frequency with appreciable weight.
    pub fn bandwidth(&self) -> f64 {
        self.frequency.abs() + 8.0 / self.width
    }

    /// `[c − 3w, c + 3w]`.
    pub fn support(&self) -> (f64, f64) {
        (self.center - 3.0 * self.width, self.center + 3.0 * self.width)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RrCheck {
    /// `max |K(t) − 2πeẋ(t)| / max |2πeẋ|` over the probe support.
    pub deviation: f64,
    pub omega_max: f64,
    /// `(t, K(t), 2πeẋ(t))`.
    pub samples: Vec<(f64, f64, f64)>,
}

const RR_STEP: f64 = 0.01;

/// `K(t) = 2e Σ_k C_k²ω_k ∫₀^t ẋ(τ) cos(ω_k(t − τ)) dτ` against `2πeẋ(t)`.
///
/// Each mode is integrated with a Filon rule on a piecewise-linear `ẋ`.
///
/// To leading order the deviation is `−4e[ẍ/ω_max + (π/L)x]`: the band
/// limit plus the absent `k = 0` mode. Both terms halve under
/// [`ModeGrid::continuum_refined`]. For a narrow-band probe they have
/// opposite signs and cancel near `N ≈ L²/2π²`, so refining `N` alone is
/// not monotone there.
pub fn rr_kernel_check(grid: &ModeGrid, probe: &VelocityProbe, p: &OscillatorParams) -> Result<RrCheck> {
    grid.check_resolves(p.beta())?;
    if !(probe.width > 0.0 && probe.center - 6.0 * probe.width >= 0.0) {
        return Err(invalid("probe must be negligible at τ = 0"));
    }
    if probe.bandwidth() > 0.5 * grid.omega_max() {
        return Err(invalid(format!(
            "probe bandwidth {} not well inside the grid (ω_max = {})",
            probe.bandwidth(),
            grid.omega_max()
        )));
    }
    let h = RR_STEP;
    let n_modes = grid.modes();
    let mut rot = Vec::with_capacity(n_modes);
    let mut c0 = Vec::with_capacity(n_modes);
    let mut c1 = Vec::with_capacity(n_modes);
    for j in 1..=n_modes {
        let theta = grid.omega(j) * h;
        let (e0, e1) = filon_moments(theta);
        let r = Complex64::from_polar(1.0, theta);
        rot.push(r);
        c0.push(r * (e0 - e1) * h);
        c1.push(r * e1 * h);
    }
    // G_j(t) = e^{iω_j t} ∫₀^t ẋ(τ) e^{−iω_j τ} dτ
    let mut g = vec![Complex64::new(0.0, 0.0); n_modes];
    // 2e · 2 signs · C²ω
    let pref = 4.0 * p.charge() * grid.spacing();
    let (lo, hi) = probe.support();
    let steps = (hi / h).ceil() as usize;
    let mut samples = Vec::new();
    let mut x0 = probe.velocity(0.0);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for step in 0..steps {
        let t1 = (step + 1) as f64 * h;
        let x1 = probe.velocity(t1);
        let mut sum = 0.0;
        for j in 0..n_modes {
            g[j] = rot[j] * g[j] + c0[j] * x0 + c1[j] * x1;
            sum += g[j].re;
        }
        x0 = x1;
        if t1 >= lo && t1 <= hi {
            let k = pref * sum;
            let target = 2.0 * PI * p.charge() * x1;
            worst = worst.max((k - target).abs());
            scale = scale.max(target.abs());
            samples.push((t1, k, target));
        }
    }
    Ok(RrCheck {
        deviation: if scale > 0.0 { worst / scale } else { worst },
        omega_max: grid.omega_max(),
        samples,
    })
}

/// `E0 = ∫₀¹ e^{−iθs} ds`, `E1 = ∫₀¹ s e^{−iθs} ds`.
fn filon_moments(theta: f64) -> (Complex64, Complex64) {
    if theta.abs() < 0.5 {
        // Σ (−iθ)^k / (k! (k+1)) and Σ (−iθ)^k / (k! (k+2))
        let z = Complex64::new(0.0, -theta);
        let mut term = Complex64::new(1.0, 0.0);
        let mut e0 = Complex64::new(0.0, 0.0);
        let mut e1 = Complex64::new(0.0, 0.0);
        for k in 0..30 {
            e0 += term / (k + 1) as f64;
            e1 += term / (k + 2) as f64;
            term = term * z / (k + 1) as f64;
        }
        return (e0, e1);
    }
    let i = Complex64::new(0.0, 1.0);
    let e = Complex64::from_polar(1.0, -theta);
    let e0 = (1.0 - e) / (i * theta);
    let e1 = e * (i / theta + 1.0 / (theta * theta)) - 1.0 / (theta * theta);
    (e0, e1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCheck {
    /// Complex amplitude `A` of `ex(t) = A e^{−iωt} + c.c.`
    pub measured: ComplexValue,
    /// `iC_kω_kα(ω_k)`.
    pub expected: ComplexValue,
    /// `measured / (iC_kω_k)`, comparable to `α(ω_k)`.
    pub response: ComplexValue,
    pub deviation: f64,
}

const SETTLE_TIMES: f64 = 20.0; // in units of 1/β
const DEMOD_PERIODS: usize = 20;
const SETTLED_TOLERANCE: f64 = 1e-6;

/// Integrates `ẍ + 2βẋ + ω₀²x = (e/m)·2C_kω sin(ωt)` from rest, waits
/// `20/β`, then demodulates `e·x` over whole periods.
pub fn transfer_function_check(grid: &ModeGrid, p: &OscillatorParams, omega_drive: f64) -> Result<TransferCheck> {
    if !(omega_drive >= grid.omega(1) && omega_drive <= grid.omega_max()) {
        return Err(invalid(format!(
            "drive frequency {omega_drive} outside the grid [{}, {}]",
            grid.omega(1),
            grid.omega_max()
        )));
    }
    let w = omega_drive;
    let ck = grid.c_squared(w).sqrt();
    let (beta, w0, e, m) = (p.beta(), p.omega0(), p.charge(), p.mass());
    let force = 2.0 * e * ck * w / m;
    let rhs = |t: f64, y: &[f64; 4]| {
        let acc = force * (w * t).sin() - 2.0 * beta * y[1] - w0 * w0 * y[0];
        [y[1], acc, y[0] * (w * t).cos(), y[0] * (w * t).sin()]
    };
    let period = 2.0 * PI / w;
    let t0 = ((SETTLE_TIMES / beta) / period).ceil() * period;
    let span = DEMOD_PERIODS as f64 * period;
    let (rel, abs) = (1e-11, 1e-14);

    let settle = solve_ode_system(rhs, 0.0, [0.0; 4], t0, rel, abs).map_err(not_converged)?;
    let s = *settle.y.last().expect("solution has a start point");
    let start = [s[0], s[1], 0.0, 0.0];
    let first = solve_ode_system(rhs, t0, start, t0 + span, rel, abs).map_err(not_converged)?;
    let f = *first.y.last().expect("solution has a start point");
    let second = solve_ode_system(rhs, t0 + span, [f[0], f[1], 0.0, 0.0], t0 + 2.0 * span, rel, abs)
        .map_err(not_converged)?;
    let g = *second.y.last().expect("solution has a start point");

    // (1/T)∫ e·x e^{iωt} dt picks out A
    let amp = |y: &[f64; 4]| Complex64::new(y[2], y[3]) * (e / span);
    let a1 = amp(&f);
    let a2 = amp(&g);
    if (a2 - a1).norm() > SETTLED_TOLERANCE * a2.norm() {
        return Err(Error::NotConverged(format!(
            "amplitude still drifting by {:.3e} after t = {t0}",
            (a2 - a1).norm() / a2.norm()
        )));
    }
    let i_ck_w = Complex64::new(0.0, ck * w);
    let expected = i_ck_w * polarizability(w, p);
    Ok(TransferCheck {
        measured: a2,
        expected,
        response: a2 / i_ck_w,
        deviation: (a2 - expected).norm() / expected.norm(),
    })
}

fn not_converged(e: Error) -> Error {
    match e {
        Error::NonConvergence { .. } | Error::StepUnderflow { .. } => Error::NotConverged(e.to_string()),
        other => other,
    }
}
