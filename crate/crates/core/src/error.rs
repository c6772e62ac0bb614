use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate (zero-length) normal")]
    DegenerateNormal,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

impl ConfigError {
    pub fn invalid(key: &str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructionError {
    #[error("degenerate volume-fraction gradient (|grad alpha| = {magnitude:e})")]
    DegenerateGradient { magnitude: f64 },
    #[error("degenerate gradient in cell ({i}, {j})")]
    DegenerateCell { i: usize, j: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("sweep Courant number {courant} exceeds 1 at face {face:?}")]
    Courant { courant: f64, face: (usize, usize) },
    #[error("singular divergence correction (1 - beta q = {denominator:e}) in cell ({i}, {j})")]
    SingularUpdate {
        i: usize,
        j: usize,
        denominator: f64,
    },
    #[error("contact angle left (0, pi) at t = {t}")]
    AngleOutOfRange { t: f64 },
    #[error("{0}")]
    Diagnostics(String),
    #[error(transparent)]
    Reconstruction(#[from] ReconstructionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Crate-level error used by the case runner and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerics(#[from] NumericsError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ReconstructionError> for Error {
    fn from(e: ReconstructionError) -> Self {
        Error::Numerics(e.into())
    }
}

impl From<GeometryError> for Error {
    fn from(e: GeometryError) -> Self {
        Error::Numerics(e.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
