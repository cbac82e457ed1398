use thiserror::Error;

/// Errors raised by the library.
///
/// The variants are grouped so a front end can map them onto a small set of
/// exit statuses: input problems, refused workloads, and solver failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("{what} needs {needed} units of work, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: f64,
        budget: f64,
    },

    #[error("dense Yang-Baxter check refused for N = {n}: bound is {bound}")]
    DenseBoundExceeded { n: usize, bound: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        trace: Vec<String>,
    },

    #[error("degenerate shape: {0}")]
    DegenerateShape(String),

    #[error("rank-deficient design: {0}")]
    RankDeficient(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn diagram(msg: impl Into<String>) -> Self {
        Error::InvalidDiagram(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
