use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A mixture or distribution was assembled from inconsistent parts.
    #[error("construction error: {0}")]
    Construction(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment of order {order} does not exist for component {component} ({kind}); largest existing order is {max_order}")]
    MomentDoesNotExist { component: usize, kind: String, order: u32, max_order: u32 },

    /// Two parameters are too close for the distinct-rate representation.
    #[error("separation error: {a} and {b} have relative separation {separation:e} < {sep_min:e}")]
    Separation { a: f64, b: f64, separation: f64, sep_min: f64 },

    #[error("positivity error: {name} must be > 0, got {value}")]
    Positivity { name: String, value: f64 },

    /// Quadrature did not reach the requested accuracy. `estimate` is the
    /// best value found.
    #[error("accuracy error: estimate {estimate} with error {error:e} exceeds tolerance {tolerance:e}")]
    Accuracy { estimate: f64, error: f64, tolerance: f64 },

    #[error("insufficient data: {needed} points required, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
