use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Jet domain errors are the common case: they signal that a closed-form
/// expression was evaluated outside the set where it is real and smooth.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet domain error: {0}")]
    Domain(String),

    #[error("derivative order ({x}, {t}) exceeds jet order ({nx}, {nt})")]
    OrderOutOfRange {
        x: usize,
        t: usize,
        nx: usize,
        nt: usize,
    },

    #[error("elliptic parameter m = {0} outside [0, 1]")]
    EllipticParameter(f64),

    #[error("complete elliptic integral diverges at m = 1")]
    DivergentK,

    #[error("unsupported equation form: {0}")]
    UnsupportedForm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown identifier: {0}")]
    UnknownId(String),

    #[error("branch condition violated: {0}")]
    Branch(String),

    #[error("simulation setup: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
