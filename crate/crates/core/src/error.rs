use crate::reflected::FieldResult;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),

    /// A permittivity with Im ε < 0 describes a gain medium under the
    /// e^{-iωt} time convention used throughout; such inputs are refused.
    #[error("unphysical permittivity: Im eps = {im:e} < 0 under the e^(-i omega t) convention")]
    UnphysicalEpsilon { im: f64 },

    /// The quadrature engine ran out of segments. The partial accumulation
    /// is carried along so callers can still report it.
    #[error("quadrature did not converge within {} segments (est_error {:e})",
            partial.segments_used, partial.est_error)]
    NonConvergence { partial: FieldResult },

    #[error("unknown unit tag: {0:?}")]
    UnknownUnit(String),

    #[error("unknown model tag: {0:?}")]
    UnknownModel(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("csv parse error: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

// Validation helpers that also refuse NaN and infinities.
pub(crate) fn ensure_positive(value: f64, what: &str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} must be positive and finite, got {value}"
        )))
    }
}

pub(crate) fn ensure_non_negative(value: f64, what: &str) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} must be non-negative and finite, got {value}"
        )))
    }
}
