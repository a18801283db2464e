use thiserror::Error;

/// Errors raised by evaluation, construction and solving routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    /// A parameter lies outside the domain of the operation.
    #[error("{name} = {value} is out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Structurally invalid input (equations, grids, initial data).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The series stopping rule did not fire within `max_terms`.
    #[error("series did not converge within {terms} terms")]
    NotConverged { terms: usize },

    /// Alternating terms cancelled beyond the configured budget.
    #[error("cancellation loss: largest term / |sum| = {ratio:.3e} exceeds budget {budget:.3e}")]
    CancellationLoss { ratio: f64, budget: f64 },

    /// An intermediate quantity exceeded the representable range.
    #[error("overflow in {0}")]
    Overflow(&'static str),

    /// A sample index outside the sampled grid.
    #[error("index {index} out of range for {len} samples")]
    IndexOutOfRange { index: usize, len: usize },

    /// Kernel singularity at the origin too strong for the requested order.
    #[error("kernel exponent {exponent} is below the differentiation order {order}")]
    SingularityTooStrong { exponent: f64, order: f64 },

    /// Multinomial composition enumeration exceeded its cap.
    #[error("composition enumeration exceeded the cap of {cap} terms")]
    CombinatorialOverflow { cap: usize },

    /// The request is well formed but outside what the solver handles.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, FracError>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> FracError {
    FracError::Domain {
        name,
        value,
        reason,
    }
}
