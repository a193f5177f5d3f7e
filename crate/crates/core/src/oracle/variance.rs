//! Finite-box momentum variance.
//!
//! `⟨P_y²(t)⟩ = Σ_K Σ_k C_K²C_k² ω_K⁴ k² |α(ω_K)|² {(n_K+1)n_k + n_K(n_k+1)} |f_Kk(t)|²`
//! with `|f_Kk|² = sin²(Δt/2)/(Δ/2)²`, `Δ = ω_K − ω_k`.
//!
//! On the uniform grid `Δ` only depends on `d = j − l`, so the double sum is
//! regrouped once into `S(d)` and every `t` then costs `O(N)`.

use rayon::prelude::*;

use super::ModeGrid;
use crate::error::{invalid, Result};
use crate::response::{alpha_abs_sq, OscillatorParams};
use crate::spectral::Occupation;

pub const DEFAULT_FIT_WINDOW: (f64, f64) = (20.0, 100.0);

/// `sin²(Δt/2)/(Δ/2)²`, with the `t²` limit for `|Δt| < 1e−6`.
pub fn finite_time_kernel(delta: f64, t: f64) -> f64 {
    if (delta * t).abs() < 1e-6 {
        return t * t;
    }
    let s = (0.5 * delta * t).sin() / (0.5 * delta);
    s * s
}

/// Precomputed regrouped sums for one grid, occupation and oscillator.
#[derive(Debug, Clone)]
pub struct VarianceEvaluator {
    grid: ModeGrid,
    // S(d) at index d + N − 1
    resonant: Vec<f64>,
    // S_g(s) at index s − 2, for s = j + l
    anti_resonant: Option<Vec<f64>>,
    diagonal: f64,
}

impl VarianceEvaluator {
    /// Errors with `GridTooCoarse` if the resonance is unresolved and with
    /// `InvalidParameter` if `ω₀` is outside the grid.
    pub fn new(grid: ModeGrid, occ: &Occupation, p: &OscillatorParams, include_anti_resonant: bool) -> Result<Self> {
        grid.check_resolves(p.beta())?;
        if !(grid.omega(1) < p.omega0() && p.omega0() < grid.omega_max()) {
            return Err(invalid(format!(
                "grid [{}, {}] does not cover omega0 = {}",
                grid.omega(1),
                grid.omega_max(),
                p.omega0()
            )));
        }
        let n_modes = grid.modes();
        let mut w = Vec::with_capacity(n_modes);
        let mut v = Vec::with_capacity(n_modes);
        let mut n = Vec::with_capacity(n_modes);
        for j in 1..=n_modes {
            let om = grid.omega(j);
            let c2 = grid.c_squared(om);
            w.push(c2 * om.powi(4) * alpha_abs_sq(om, p));
            v.push(c2 * om * om);
            n.push(occ.n(om));
        }
        let nn = n_modes as isize;
        let resonant: Vec<f64> = (-(nn - 1)..nn)
            .into_par_iter()
            .map(|d| {
                let lo = 0.max(-d) as usize;
                let hi = (nn.min(nn - d)) as usize;
                let mut s = 0.0;
                for l in lo..hi {
                    let j = (l as isize + d) as usize;
                    s += w[j] * v[l] * (n[j] + n[l] + 2.0 * n[j] * n[l]);
                }
                s
            })
            .collect();
        let anti_resonant = include_anti_resonant.then(|| {
            // s = (j+1) + (l+1) in 1-based indices, from 2 to 2N
            (0..2 * nn - 1)
                .into_par_iter()
                .map(|s| {
                    let lo = 0.max(s - (nn - 1)) as usize;
                    let hi = s.min(nn - 1) as usize;
                    let mut acc = 0.0;
                    for l in lo..=hi {
                        let j = s as usize - l;
                        acc += w[j] * v[l] * ((n[j] + 1.0) * (n[l] + 1.0) + n[j] * n[l]);
                    }
                    acc
                })
                .collect()
        });
        let diagonal = (0..n_modes).map(|j| w[j] * v[j] * 2.0 * (n[j] + n[j] * n[j])).sum();
        Ok(VarianceEvaluator { grid, resonant, anti_resonant, diagonal })
    }

    pub fn grid(&self) -> &ModeGrid {
        &self.grid
    }

    /// `⟨P_y²(t)⟩`. `t` must lie in `[0, L/2]`, before the box re-coheres.
    pub fn variance(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= 0.5 * self.grid.length()) {
            return Err(invalid(format!(
                "t = {t} outside the resolvable window [0, L/2 = {}]",
                0.5 * self.grid.length()
            )));
        }
        Ok(self.resonant_part(t) + self.anti_resonant_part(t))
    }

    fn resonant_part(&self, t: f64) -> f64 {
        let delta = self.grid.spacing();
        let offset = self.grid.modes() as isize - 1;
        let mut sum = 0.0;
        for (i, s) in self.resonant.iter().enumerate() {
            sum += finite_time_kernel(delta * (i as isize - offset) as f64, t) * s;
        }
        // four sign combinations of (K, k)
        4.0 * sum
    }

    /// Anti-resonant (`ω_K + ω_k`) contribution; zero unless requested.
    pub fn anti_resonant_part(&self, t: f64) -> f64 {
        let Some(g) = &self.anti_resonant else { return 0.0 };
        let delta = self.grid.spacing();
        let mut sum = 0.0;
        for (i, s) in g.iter().enumerate() {
            sum += finite_time_kernel(delta * (i + 2) as f64, t) * s;
        }
        4.0 * sum
    }

    /// Share of `⟨P_y²(t)⟩` from identical modes `K = k`.
    pub fn diagonal_fraction(&self, t: f64) -> Result<f64> {
        let total = self.variance(t)?;
        // two of the four sign combinations at j = l are the same mode
        Ok(if total > 0.0 { 2.0 * t * t * self.diagonal / total } else { 0.0 })
    }
}

/// Single evaluation; rebuilds the regrouped sums.
pub fn discrete_variance(t: f64, grid: ModeGrid, occ: &Occupation, p: &OscillatorParams) -> Result<f64> {
    VarianceEvaluator::new(grid, occ, p, false)?.variance(t)
}

/// `⟨P_y²(t)⟩` over a time grid with an OLS slope on the fit window.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub fitted_slope: f64,
    pub fit_window: (f64, f64),
    /// Identical-mode share at the last time.
    pub diagonal_fraction: f64,
}

pub fn variance_curve(evaluator: &VarianceEvaluator, times: &[f64], fit_window: (f64, f64)) -> Result<VarianceCurve> {
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("times must be strictly increasing"));
    }
    let values = times.iter().map(|&t| evaluator.variance(t)).collect::<Result<Vec<_>>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(&values)
        .filter(|(t, _)| **t >= fit_window.0 && **t <= fit_window.1)
        .map(|(t, v)| (*t, *v))
        .unzip();
    if xs.len() < 2 {
        return Err(invalid("fewer than two samples inside the fit window"));
    }
    let last = *times.last().expect("at least two samples");
    Ok(VarianceCurve {
        fitted_slope: ols_slope(&xs, &ys),
        diagonal_fraction: evaluator.diagonal_fraction(last)?,
        times: times.to_vec(),
        values,
        fit_window,
    })
}

/// Ordinary least-squares slope.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
