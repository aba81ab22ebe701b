use thiserror::Error;

/// Library error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result outside the representable range (e.g. a ratio whose denominator
    /// underflowed to zero).
    #[error("range error: {0}")]
    Range(String),

    /// A size or work budget was exceeded; the message names the cheaper
    /// alternative when there is one.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An interval evaluation straddles a piecewise breakpoint and cannot be
    /// bounded tightly; split the box and retry.
    #[error("split required: {0}")]
    SplitRequired(String),
}

pub type Result<T> = std::result::Result<T, Error>;
