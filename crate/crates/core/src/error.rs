use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The two arguments of a kernel coincide.
    #[error("singular evaluation in {func}: {detail}")]
    Singular { func: &'static str, detail: String },

    /// An integrand produced NaN or infinity at a quadrature node.
    #[error("non-finite integrand value at node {node} (r = {r}, theta = {theta})")]
    NonFinite { node: usize, r: f64, theta: f64 },

    /// An iterative method did not converge.
    #[error("{method} did not converge after {iterations} iterations")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
    },

    /// A root could not be bracketed.
    #[error("failed to bracket a root: {0}")]
    Bracket(String),

    /// Malformed user expression or argument.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
