use crate::mode_algebra::ModeLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature for {integral} did not converge (estimated relative error {estimate:.3e} after {panels} panels)")]
    Convergence {
        integral: &'static str,
        estimate: f64,
        panels: usize,
    },

    #[error("modes are not independent: both expressions contain {0}")]
    SharedMode(ModeLabel),

    #[error("vacuum expectation requires Unruh or auxiliary modes, found {0}")]
    NonVacuumMode(ModeLabel),

    #[error("Wick products of length {0} are not supported (expected 1, 2 or 4)")]
    ProductLength(usize),

    #[error("expression still carries an unresolved local-oscillator channel")]
    UnresolvedLocalOscillator,

    #[error("cannot map {0} between Rindler and Unruh bases")]
    UnmappedSector(ModeLabel),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("Fock truncation error {deviation:.3e} exceeds tolerance {tolerance:.1e} at cutoff {cutoff}")]
    Truncation {
        cutoff: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("refinement from {coarse} to {fine} bins changed the variance by {change:.3e} (tolerance {tolerance:.1e})")]
    NotConverged {
        coarse: usize,
        fine: usize,
        change: f64,
        tolerance: f64,
    },
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        })
    }
}
