use thiserror::Error;

/// Errors raised by the algebraic layers (everything except input parsing).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent matrix {k} is {rows}x{cols}, expected {n}x{n}")]
    NotSquare {
        k: usize,
        rows: usize,
        cols: usize,
        n: usize,
    },
    #[error("diagonal must vanish: matrix {k} has entry ({i},{i}) = {value}")]
    NonzeroDiagonal { k: usize, i: usize, value: i64 },
    #[error("matrix {k} is not antisymmetric at ({i},{j}): {a} vs {b}")]
    NotAntisymmetric {
        k: usize,
        i: usize,
        j: usize,
        a: i64,
        b: i64,
    },
    #[error("nonzero matrix required")]
    ZeroUniparameter,
    #[error("at most {max} generators are supported, got {n}")]
    TooManyGenerators { n: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent overflow while evaluating the bicharacter")]
    ExponentOverflow,
    #[error("negative exponent in a monomial of the monoid algebra")]
    NegativeExponent,
    #[error("index {index} out of range for {n} generators")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("denominator vanishes: f_{k} is zero at the requested point")]
    DenominatorVanishes { k: usize },
    #[error("{n} generators exceed the configured bound of {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("label does not fit the bicharacter: {0}")]
    InvalidLabel(String),
    #[error("labels live on different sides of the correspondence")]
    SideMismatch,
    #[error("character values must be nonzero")]
    ZeroCharacter,
    #[error("limit formula failed for s={s:?}, t={t:?}: {detail}")]
    LimitMismatch {
        s: Vec<i64>,
        t: Vec<i64>,
        detail: String,
    },
    #[error("commuting diagram failed for s={s:?}: {detail}")]
    DiagramMismatch { s: Vec<i64>, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
