use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The point lies on a singular set of the toroidal chart.
    #[error("outside the toroidal chart domain: {0}")]
    ChartDomain(String),

    /// An argument is outside the domain of a formula (e.g. η ≤ 0 where sinh⁻²η appears).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The target-space metric degenerates (e.g. at the poles of the sphere chart).
    #[error("degenerate target metric: {0}")]
    DegenerateTarget(String),

    #[error("quadrature did not converge: estimate {value}, error estimate {error_estimate:.3e} above {threshold:.1e}")]
    Quadrature {
        value: f64,
        error_estimate: f64,
        threshold: f64,
    },

    /// Two curves are too close for the discretised linking integral to be trusted.
    #[error("curves too close for an accurate linking integral: min distance {min_distance:.3e} < {threshold:.3e}")]
    CurvesTooClose { min_distance: f64, threshold: f64 },

    #[error("linking integral did not converge after {levels} refinements (last change {last_change:.3e})")]
    LinkingNotConverged { levels: usize, last_change: f64 },

    /// Finite-difference step fell below what the arithmetic can resolve.
    #[error("finite-difference step underflow at step {0:e}")]
    StepUnderflow(f64),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
