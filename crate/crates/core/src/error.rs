use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarSetMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("Lie algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point does not lie on the orbit: {0}")]
    NotOnOrbit(String),

    #[error("orbit is zero-dimensional")]
    ZeroDimensionalOrbit,

    #[error("unsupported expression class: {0}")]
    UnsupportedClass(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("parameter outside domain: {0}")]
    Domain(String),

    #[error("evolution unstable: L2 norm grew from {initial:.3e} to {current:.3e} at t = {time:.4}")]
    Instability { initial: f64, current: f64, time: f64 },

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
