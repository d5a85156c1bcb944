use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants are deliberately coarse: callers mostly route on the kind
/// (validation, numeric failure, cross-check mismatch) and print the message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("p = 1/2 is a singular point of the moment recursion; use the limit-half workflow")]
    HalfPoint,

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("no closed form for cost family `{0}`")]
    NoClosedForm(String),

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("bound violated at s = {s}: {detail}")]
    BoundViolation { s: usize, detail: String },

    #[error("extrapolation unstable: {0}")]
    ExtrapolationUnstable(String),

    #[error("finite-difference derivative unstable: {0}")]
    DerivativeUnstable(String),

    #[error("malformed path: {0}")]
    MalformedPath(String),

    #[error("value is not rational: {0}")]
    NotRational(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for failures of the numerics (poles, non-convergence), as
    /// opposed to bad input or failed cross-checks.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Pole(_)
                | Error::Domain(_)
                | Error::Convergence(_)
                | Error::ExtrapolationUnstable(_)
                | Error::DerivativeUnstable(_)
                | Error::NotRational(_)
        )
    }

    /// True for failed consistency checks between independent routes.
    pub fn is_mismatch(&self) -> bool {
        matches!(self, Error::Mismatch(_) | Error::BoundViolation { .. })
    }
}
