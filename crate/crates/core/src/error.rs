use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent inputs (shapes, empty sets, bad values).
    #[error("input error: {0}")]
    Input(String),

    /// A model parameter is non-finite or out of its valid range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A covariance matrix could not be factorized even after jitter escalation.
    #[error("numerical error: {context}: factorization failed at jitter levels {attempted:?}")]
    Numerical { context: String, attempted: Vec<f64> },

    /// A value violates a documented domain constraint.
    #[error("validation error: {0}")]
    Validation(String),

    /// A document could not be parsed.
    #[error("parse error in {path}: {field}: {message}")]
    Parse { path: String, field: String, message: String },

    /// A formula precondition does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    /// The sample covariance has no eigenvalue above the rank threshold.
    #[error("degenerate moments: no eigenvalue of the sample covariance exceeds {threshold:e} x max eigenvalue")]
    DegenerateMoments { threshold: f64 },

    #[error("no matching data: no input is shared by all {n_tasks} tasks within tolerance {tol:e}")]
    NoMatchingData { n_tasks: usize, tol: f64 },

    /// The objective was non-finite while differencing coordinate `index`.
    #[error("evaluation error at coordinate {index}: objective is {value}")]
    Evaluation { index: usize, value: f64 },

    #[error("initialization failed after {attempts} attempts: {last}")]
    Initialization { attempts: usize, last: String },

    /// An error raised while evaluating a named task.
    #[error("task `{task}`: {source}")]
    Task {
        task: String,
        #[source]
        source: Box<Error>,
    },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn in_task(self, task: &str) -> Self {
        Error::Task { task: task.to_string(), source: Box::new(self) }
    }

    /// The innermost error, looking through task wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Task { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures of the numerical kind (factorization, non-finite objective).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::Numerical { .. }
                | Error::Evaluation { .. }
                | Error::DegenerateMoments { .. }
                | Error::Initialization { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
