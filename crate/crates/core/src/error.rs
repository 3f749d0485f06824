use thiserror::Error;

/// Errors raised by the numerical kernel and the geometric constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CmcError {
    #[error("argument {value} is outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("adaptive quadrature on [{a}, {b}] did not converge (estimated error {error:e})")]
    NonConvergence { a: f64, b: f64, error: f64 },

    #[error("non-finite value {value} encountered at {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}{note}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
        note: &'static str,
    },

    #[error("H must exceed n-1 = {critical} (got H = {mean_curvature})")]
    SubcriticalH { mean_curvature: f64, critical: f64 },

    #[error("operation requires {expected}")]
    WrongSpace { expected: &'static str },

    #[error("{what} is not strictly monotone on [{lo}, {hi}]")]
    NonMonotone {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl CmcError {
    /// True for errors caused by the caller's parameters rather than by a
    /// numerical failure.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            CmcError::OutOfDomain { .. }
                | CmcError::SubcriticalH { .. }
                | CmcError::WrongSpace { .. }
                | CmcError::InvalidParameter(_)
        )
    }
}

pub type Result<T, E = CmcError> = std::result::Result<T, E>;
