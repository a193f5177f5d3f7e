//! Special functions, quadrature and ODE integration shared by every other
//! module. All routines are pure and safe to call from several threads.

mod gamma;
mod ode;
mod oscillatory;
mod quadrature;

pub use gamma::{gamma_imaginary_abs_sq, log_gamma_complex, ComplexValue};
pub use ode::{solve_ode_system, solve_scalar_ode, OdeSolution, SampledCurve};
pub use oscillatory::{
    neville_at_zero, oscillatory_phase_integral, oscillatory_phase_trace, LadderTrace, PhaseSign,
};
pub(crate) use oscillatory::upper_side as chirp_upper_side;
pub use quadrature::{
    gauss_kronrod_15, integrate_adaptive, integrate_semi_infinite, Integral, QuadValue,
    QuadratureSpec, TailPolicy,
};
