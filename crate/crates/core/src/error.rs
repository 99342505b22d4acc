//! Error types shared across the simulator.

use thiserror::Error;

/// Errors produced by table lookups, decision-diagram construction, and
/// simulation operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite complex value ({re}, {im}) cannot be stored")]
    NonFinite { re: f64, im: f64 },

    #[error("qudit dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("register must contain at least one qudit")]
    EmptyRegister,

    #[error("node at level {level} requires {expected} successors, got {got}")]
    ArityMismatch {
        level: u16,
        expected: usize,
        got: usize,
    },

    #[error("successor of a level-{parent} node sits at level {child}; edges must descend")]
    LevelOrder { parent: u16, child: u16 },

    #[error("level {level} is outside the register (size {size})")]
    LevelOutOfRange { level: u16, size: usize },

    #[error("operands have mismatched kinds or level ranges")]
    OperandMismatch,

    #[error("basis index digit {digit} at wire {wire} exceeds dimension {dim}")]
    IndexOutOfRange { wire: usize, digit: usize, dim: usize },

    #[error("basis index has {got} digits, register has {expected} wires")]
    IndexLength { expected: usize, got: usize },

    #[error("state norm is {norm}, expected 1 within {tol}")]
    Unnormalized { norm: f64, tol: f64 },

    #[error("wire {wire} is outside the register (size {size})")]
    WireOutOfRange { wire: usize, size: usize },

    #[error("level {level} is not a valid state of wire {wire} (dimension {dim})")]
    ControlLevelOutOfRange { wire: usize, level: usize, dim: usize },

    #[error("control on wire {0} collides with the gate target")]
    ControlOnTarget(usize),

    #[error("duplicate control on wire {0}")]
    DuplicateControl(usize),

    #[error("matrix on wire {wire} has dimension {matrix_dim}, wire has dimension {wire_dim}")]
    GateDimensionMismatch {
        wire: usize,
        matrix_dim: usize,
        wire_dim: usize,
    },

    #[error("matrix is not unitary within {tol} (max deviation {deviation})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("levels ({t1}, {t2}) are not an ordered pair below dimension {dim}")]
    InvalidLevelPair { t1: usize, t2: usize, dim: usize },

    #[error(
        "csum control dimension {control_dim} exceeds target dimension {target_dim}"
    )]
    CsumDimensionMismatch { control_dim: usize, target_dim: usize },

    #[error("generator requires at least {required} qudits, got {got}")]
    TooFewQudits { required: usize, got: usize },

    #[error("register total dimension overflows")]
    DimensionOverflow,

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A circuit-text diagnostic carrying the 1-based line and column of the
/// offending token.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
