use thiserror::Error;

/// Errors produced by the conversion, normalization and synthesis routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid spline: {0}")]
    InvalidSpline(String),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("knots are not interlaced: {0}")]
    Interlacing(String),

    #[error("prescribed knots are not pairwise distinct: {0} occurs more than once")]
    DuplicateKnot(f64),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid synthesis option: {0}")]
    InvalidOption(String),

    #[error("prescribed knots inactive after {attempts} attempt(s): {inactive:?}")]
    InactiveKnots { inactive: Vec<f64>, attempts: usize },

    #[error("sign selection left knots uncovered: {0:?}")]
    Uncovered(Vec<usize>),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(what: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub(crate) fn ensure_len(what: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what: what.to_string(),
            expected,
            found,
        })
    }
}
