use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// An iterative evaluation stopped before reaching its tolerance.
    #[error("{func} did not converge (value {value:e}, estimated error {error_estimate:e})")]
    Convergence {
        func: &'static str,
        value: f64,
        error_estimate: f64,
    },

    /// Closed forms for the product distribution need equal hop exponents.
    #[error("closed form requires equal alpha on both hops (got {hop1} and {hop2})")]
    AlphaMismatch { hop1: f64, hop2: f64 },

    /// A configuration field violates its invariant.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
