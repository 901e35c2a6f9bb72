use thiserror::Error;

/// Errors raised by operator constructors, root builders and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {op} got {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("window of size {size} exceeds matrix dimensions {rows}x{cols}")]
    WindowTooLarge {
        size: usize,
        rows: usize,
        cols: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("series has vanishing constant term; no analytic square root at the origin")]
    VanishingConstantTerm,

    #[error("point {re}+{im}i lies outside the open unit disc")]
    OutsideDisc { re: f64, im: f64 },

    #[error("singular triangular solve at pivot {0}")]
    SingularSolve(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("shift root parameters rejected: {0}")]
    InvalidShiftParams(String),

    #[error("quadrature did not converge: doubling check differs by {diff:e} (tolerance {tol:e})")]
    QuadratureBudget { diff: f64, tol: f64 },

    #[error("Lebedev Gram entry ({m}, {n}) deviates by {deviation:e} (tolerance {tol:e})")]
    GramDeviation {
        m: usize,
        n: usize,
        deviation: f64,
        tol: f64,
    },

    #[error("unknown builder or claim id `{0}`")]
    UnknownId(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
