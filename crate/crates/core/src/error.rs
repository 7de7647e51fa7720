use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates its type invariant.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },

    /// A series or continued fraction did not reach tolerance within its term budget.
    #[error("{what} did not converge after {terms} terms")]
    Convergence { what: &'static str, terms: usize },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tolerance:e} after {subdivisions} subdivisions")]
    Quadrature {
        error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("result overflows f64: {0}")]
    Overflow(String),

    /// A diversity-order fit was asked for on a range where it is meaningless.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }

    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Quadrature { .. } | Error::Overflow(_) | Error::DegenerateFit(_)
        )
    }
}
