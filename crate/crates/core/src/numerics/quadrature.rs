//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite ranges.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// How the upper end of a `∫₀^∞` integral is handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// Integrate on `[0, omega_max]` and stop there.
    Fixed { omega_max: f64 },
    /// Add doubling panels until the last one is below
    /// `tail_fraction · rel_tol` of the running total.
    Adaptive { tail_fraction: f64 },
}

/// Tolerances and limits shared by every integrator in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_policy: TailPolicy,
    /// Damping rates for regularized oscillatory integrals, in units of the
    /// acceleration `a`. Strictly decreasing and positive.
    pub epsilon_ladder: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            max_subdivisions: 2000,
            tail_policy: TailPolicy::Adaptive {
                tail_fraction: 1e-3,
            },
            epsilon_ladder: (0..8).map(|k| 0.2 / f64::powi(2.0, k)).collect(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(invalid(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(invalid(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions must be >= 1"));
        }
        match self.tail_policy {
            TailPolicy::Fixed { omega_max } if !(omega_max > 0.0 && omega_max.is_finite()) => {
                return Err(invalid(format!("omega_max must be finite and > 0, got {omega_max}")));
            }
            TailPolicy::Adaptive { tail_fraction } if !(tail_fraction > 0.0) => {
                return Err(invalid(format!("tail_fraction must be > 0, got {tail_fraction}")));
            }
            _ => {}
        }
        if self.epsilon_ladder.is_empty() {
            return Err(invalid("epsilon_ladder must not be empty"));
        }
        if self.epsilon_ladder.iter().any(|&e| !(e > 0.0)) {
            return Err(invalid("epsilon_ladder entries must be > 0"));
        }
        if self.epsilon_ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(invalid("epsilon_ladder must be strictly decreasing"));
        }
        Ok(())
    }

    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_cutoff(mut self, omega_max: f64) -> Self {
        self.tail_policy = TailPolicy::Fixed { omega_max };
        self
    }
}

/// Value, error estimate and upper limit actually used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub cutoff: f64,
}

/// Values a Gauss–Kronrod rule can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One application of the 15-point rule: `(kronrod, |kronrod − gauss|)`.
pub fn gauss_kronrod_15<T, F>(f: &F, a: f64, b: f64) -> (T, f64)
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).magnitude())
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection on `[a, b]`.
///
/// Returns the value and its error estimate. Stops once the summed error is
/// below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<T, F>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<(T, f64)>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return Ok((T::zero(), 0.0));
    }
    let (value, error) = gauss_kronrod_15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut splits = 0;
    loop {
        let tol = abs_tol.max(rel_tol * total.magnitude());
        if total_err <= tol {
            break;
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if splits >= max_subdivisions || !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) {
            // Roundoff floor: the segment cannot be split further.
            let floor = 50.0 * f64::EPSILON * total.magnitude();
            heap.push(worst);
            if total_err <= floor.max(tol) {
                break;
            }
            return Err(Error::NonConvergence {
                budget: max_subdivisions,
                error: total_err,
            });
        }
        let (v1, e1) = gauss_kronrod_15(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        splits += 1;
        if splits % 64 == 0 {
            // resum to shed accumulated cancellation error
            total = heap.iter().fold(T::zero(), |acc, s| acc + s.value);
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    let value = heap.iter().fold(T::zero(), |acc, s| acc + s.value);
    Ok((value, total_err.max(0.0)))
}

const FIRST_PANEL: f64 = 1.0;
const MAX_TAIL_PANELS: usize = 64;
const FLAT_TAIL_PANELS: usize = 6;

/// `∫₀^∞ f(ω) dω` under `spec.tail_policy`.
///
/// With [`TailPolicy::Adaptive`] the range is covered by `[0, 1]` followed by
/// panels `[W, 2W]`. Integration stops when the geometric tail estimate of
/// the last panel drops below `tail_fraction` of the tolerance budget; a run
/// of panels with nearly equal contributions (a `1/ω`-like tail) is reported
/// as [`Error::DivergentTail`].
pub fn integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    match spec.tail_policy {
        TailPolicy::Fixed { omega_max } => {
            let (value, abs_error) = integrate_adaptive(
                &f,
                0.0,
                omega_max,
                spec.rel_tol,
                spec.abs_tol,
                spec.max_subdivisions,
            )?;
            Ok(Integral { value, abs_error, cutoff: omega_max })
        }
        TailPolicy::Adaptive { tail_fraction } => adaptive_tail(&f, spec, tail_fraction),
    }
}

fn adaptive_tail<F>(f: &F, spec: &QuadratureSpec, tail_fraction: f64) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    // Each panel gets a share of the budget; the tail check uses the total.
    let panel_rel = spec.rel_tol * 0.1;
    let panel_abs = spec.abs_tol * 0.1;
    let (first, first_err) =
        integrate_adaptive(f, 0.0, FIRST_PANEL, panel_rel, panel_abs, spec.max_subdivisions)?;
    let mut total = first;
    let mut total_err = first_err;
    let mut prev = first;
    let mut lo = FIRST_PANEL;
    let mut flat_run = 0;
    for _ in 0..MAX_TAIL_PANELS {
        let hi = 2.0 * lo;
        let (c, e) = integrate_adaptive(
            f,
            lo,
            hi,
            panel_rel,
            panel_abs.max(panel_rel * total.abs()),
            spec.max_subdivisions,
        )?;
        total += c;
        total_err += e;
        let ratio = if prev != 0.0 { (c / prev).abs() } else if c == 0.0 { 0.0 } else { f64::INFINITY };
        if (0.8..=1.25).contains(&ratio) && c.abs() > spec.abs_tol {
            flat_run += 1;
            if flat_run >= FLAT_TAIL_PANELS {
                return Err(Error::DivergentTail { omega: hi });
            }
        } else {
            flat_run = 0;
        }
        let budget = tail_fraction * (spec.rel_tol * total.abs()).max(spec.abs_tol);
        if ratio < 1.0 {
            let tail = c.abs() * ratio / (1.0 - ratio);
            if c.abs() <= budget && tail <= budget {
                return Ok(Integral {
                    value: total,
                    abs_error: total_err + tail,
                    cutoff: hi,
                });
            }
        }
        prev = c;
        lo = hi;
    }
    Err(Error::DivergentTail { omega: lo })
}
