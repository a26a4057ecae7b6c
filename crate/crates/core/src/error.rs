use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument lies outside the range where the accuracy contract holds.
    #[error("range error: {what} = {value} violates {bound}")]
    Range {
        what: &'static str,
        value: f64,
        bound: String,
    },

    /// The requested method or family does not apply to the parameters.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Two successive refinements of a numerical scheme disagree.
    #[error("accuracy error in {context}: {coarse} vs {fine}")]
    Accuracy {
        context: &'static str,
        coarse: f64,
        fine: f64,
    },

    /// The parameter pair admits no density solution.
    #[error("density solution exists iff m > alpha (got m = {m}, alpha = {alpha})")]
    NoDensity { m: f64, alpha: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag used by front ends.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Range { .. } => "range",
            Error::Precondition(_) => "precondition",
            Error::Accuracy { .. } => "accuracy",
            Error::NoDensity { .. } => "existence",
            Error::Invalid(_) => "invalid",
        }
    }
}
