use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Tower or code parameters outside their valid range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Exact integer arithmetic would exceed the supported width, or a table
    /// would be too large to materialise.
    #[error("parameter too large: {0}")]
    ParameterTooLarge(String),

    #[error("construction undefined for odd level (nu = {nu})")]
    OddLevel { nu: u32 },

    #[error("length constraint violated: mu = {mu} must be < n = {n}")]
    LengthConstraint { mu: i64, n: i64 },

    /// A named precondition of a bound does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Real-valued arguments outside the domain of an asymptotic formula.
    #[error("domain violation: {0}")]
    Domain(String),

    /// Enumeration refused because its estimated cost exceeds the budget.
    #[error("workload guard: estimated {estimate} steps exceeds budget {budget}")]
    Workload { estimate: u128, budget: u128 },

    /// A report-level invariant failed at a specific (1-based) index.
    #[error("invariant violated at index {index}: {detail}")]
    Invariant { index: usize, detail: String },
}
