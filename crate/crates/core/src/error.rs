use thiserror::Error;

/// Errors raised by the scattering and transformation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the supported mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a singular point (for example `z = 0`).
    #[error("singularity: {0}")]
    Singularity(String),

    /// A run configuration that cannot be honoured (grid too short, overflow guard, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Integrator or consistency failure.
    #[error("numerical error: {message} (worst local error {worst:.3e})")]
    Numerical { message: String, worst: f64 },

    /// Input the transformation refuses on physical grounds.
    #[error("unphysical case: {0}")]
    Unphysical(String),

    /// A violated hypothesis of the construction (singular Jost matrix, degenerate origin data).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// `det W[u,u*]` is not positive at some radius.
    #[error("regularity violated at r = {r:.6e}: det W[u,u*] = {det:.3e}")]
    Regularity { r: f64, det: f64 },

    /// The Jost matrix is singular at a real wave number.
    #[error("S-matrix pole at k = {k}: {message}")]
    Pole { k: f64, message: String },

    /// Neighbouring phase samples differ by more than the unwrapping can resolve.
    #[error("phase continuity violated between k = {k_lo} and k = {k_hi}: {message}")]
    Continuity {
        k_lo: f64,
        k_hi: f64,
        message: String,
    },

    /// Malformed text input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Well-formed text whose content does not match the expected layout.
    #[error("format error: {0}")]
    Format(String),

    /// A step of a chained transformation failed.
    #[error("chain step {step}: {source}")]
    Chain { step: usize, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// The innermost error, looking through chain-step wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Chain { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
