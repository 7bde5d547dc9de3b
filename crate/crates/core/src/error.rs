use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: shape mismatch, label out of range, unknown name.
    #[error("input error: {0}")]
    Input(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("object is zero; {0} needs a nonzero object")]
    ZeroObject(&'static str),

    #[error("objects live over different fusion rings")]
    RingMismatch,

    /// A morphism block is singular or worse-conditioned than the cap.
    #[error("singular deformation at label {label}: condition number {condition:e}")]
    SingularDeformation { label: usize, condition: f64 },

    #[error("search limit exceeded: {0}")]
    Resource(String),

    /// A structure failed validation; carries the violation messages.
    #[error("validation failed: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
