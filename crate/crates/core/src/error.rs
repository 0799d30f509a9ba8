use thiserror::Error;

/// Errors raised by the grid, scheme and audit routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid too small: {nx}x{ny} (need at least {min} cells per direction)")]
    GridTooSmall { nx: usize, ny: usize, min: usize },

    #[error("invalid grid parameter `{name}` = {value}")]
    InvalidGrid { name: &'static str, value: f64 },

    #[error("initial condition is not finite in cell ({j}, {k})")]
    NonFiniteSample { j: usize, k: usize },

    #[error("index ({j}, {k}) is outside the stored field")]
    OutOfRange { j: isize, k: isize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("CFL pair (alpha={alpha}, beta={beta}) rejected: {reason}")]
    CflRejected {
        alpha: f64,
        beta: f64,
        reason: String,
    },

    #[error("non-finite value produced at step {step}")]
    NonFinite { step: usize },

    #[error("field support reaches within {margin} cells of a far edge")]
    SupportNearFarEdge { margin: usize },

    #[error("symbol abscissa x = {0} is outside [0, 1]")]
    AbscissaOutOfRange(f64),

    #[error("matrix has non-finite entries")]
    NonFiniteMatrix,
}

pub type Result<T> = std::result::Result<T, Error>;
