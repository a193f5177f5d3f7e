use thiserror::Error;

/// Every failure the library can report.
///
/// Variant names double as the stable error names printed by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("PoleError: Gamma has a pole at {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("NonConvergence: subdivision budget of {budget} exhausted (error estimate {error:e})")]
    NonConvergence { budget: usize, error: f64 },

    #[error("DivergentTail: tail contributions stopped shrinking beyond omega = {omega:e}")]
    DivergentTail { omega: f64 },

    #[error("ExtrapolationUnstable: epsilon-ladder extrapolants are not Cauchy (last step {last_step:e})")]
    ExtrapolationUnstable { last_step: f64 },

    #[error("StepUnderflow: step size {step:e} collapsed at omega = {omega:e}")]
    StepUnderflow { step: f64, omega: f64 },

    #[error("DerivativeUnavailable: {0}")]
    DerivativeUnavailable(String),

    #[error("CutoffRequired: the coth form diverges logarithmically and needs a fixed cutoff")]
    CutoffRequired,

    #[error("GridTooCoarse: mode spacing {spacing:e} exceeds damping {damping:e}")]
    GridTooCoarse { spacing: f64, damping: f64 },

    #[error("NotConverged: {0}")]
    NotConverged(String),

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    #[error("InvalidTable: {0}")]
    InvalidTable(String),
}

impl Error {
    /// Short machine-readable name, e.g. `DivergentTail`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::DivergentTail { .. } => "DivergentTail",
            Error::ExtrapolationUnstable { .. } => "ExtrapolationUnstable",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::DerivativeUnavailable(_) => "DerivativeUnavailable",
            Error::CutoffRequired => "CutoffRequired",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::NotConverged(_) => "NotConverged",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InvalidTable(_) => "InvalidTable",
        }
    }

    /// True for failures of the numerical machinery, as opposed to input
    /// that can never work (bad values, short tables, missing cutoff,
    /// unresolved grid).
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidParameter(_)
                | Error::InvalidTable(_)
                | Error::CutoffRequired
                | Error::DerivativeUnavailable(_)
                | Error::GridTooCoarse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
