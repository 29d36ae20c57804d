use num_complex::Complex64;
use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `1 + L(s)` vanished identically, or a denominator vanished at the
    /// evaluation point.
    #[error("singular: {0}")]
    Singular(String),

    /// A closed loop that had to be stable is not.
    #[error("unstable closed loop: {} pole(s) with Re >= 0, e.g. {:?}", .poles.len(), .poles.first())]
    Unstable { poles: Vec<Complex64> },

    /// A numerical routine failed to converge or lost definiteness.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Invalid configuration; `path` names the offending field.
    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    /// Simulation produced a non-finite or runaway state.
    #[error("simulation diverged after sample {last_valid} (t = {time:.6} s): {msg}")]
    Divergence { last_valid: usize, time: f64, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
