use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum WradonError {
    /// A quadrature could not reach the requested tolerance within the
    /// evaluation budget. Carries the best estimate obtained so far.
    #[error("evaluation budget exceeded: needed {needed} evals, allowed {allowed} (best estimate {estimate:e} ± {error_estimate:e})")]
    BudgetExceeded {
        needed: u64,
        allowed: u64,
        estimate: f64,
        error_estimate: f64,
    },

    /// Evaluation requested outside the domain of definition of a weight.
    #[error("domain error: {0}")]
    Domain(String),

    /// A plane frame failed the orthonormality checks.
    #[error("frame error: {0}")]
    Frame(String),

    /// No epsilon window could be certified for a local weight.
    #[error("local weight construction failed at s0={s0}: {reason}")]
    ConstructionFailed { s0: f64, reason: String },

    /// No admissible sign-certified radius was found for a local weight.
    #[error("sign search failed at s0={s0}")]
    SignSearchFailed { s0: f64 },

    /// The greedy cover exceeded the configured window limit.
    #[error("cover too large: {n} windows exceed limit {n_max}")]
    CoverTooLarge { n: usize, n_max: usize },

    /// No positivity threshold below 1 could be certified.
    #[error("no delta0 < 1 certified at k_max={k_max}; increase k_max")]
    DeltaNotFound { k_max: u32 },

    /// A line misses the requested shell.
    #[error("line with |x0|={x0_norm} does not cross the inner radius of shell {k}")]
    NoIntersection { x0_norm: f64, k: u32 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WradonError>;
