use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular system: pivot {pivot:e} at row {row} (scale {scale:e})")]
    SingularSystem { row: usize, pivot: f64, scale: f64 },

    #[error(
        "Picard iteration did not converge{}: {iterations} iterations, last increment {increment:e}",
        step.map(|s| format!(" at step {s}")).unwrap_or_default()
    )]
    PicardNonConvergence {
        step: Option<usize>,
        iterations: usize,
        increment: f64,
    },

    #[error("unsupported viscosity {0}: Fourier coefficients underflow")]
    UnsupportedViscosity(f64),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("mesh N = {n_elements}: {source}")]
    Mesh {
        n_elements: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
