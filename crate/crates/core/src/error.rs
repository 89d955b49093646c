use thiserror::Error;

/// Errors raised by the symbolic, combinatorial and numerical layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for m = {m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("word of length {len} exceeds the configured bound {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("presentation mismatch")]
    PresentationMismatch,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("malformed rational {0:?} (expected \"p/q\" or an integer)")]
    MalformedRational(String),
    #[error("theta entry {0:?} is not an exact rational; symbolic operations need rational angles")]
    InexactTheta(String),
    #[error("element has a component of nonzero degree {0:?}")]
    NonzeroDegree(Vec<i64>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("character {0} is not positive")]
    NonPositiveCharacter(String),
    #[error("value {0} is not rational")]
    NotRational(String),
    #[error("inconsistent window: {0}")]
    InconsistentWindow(String),
    #[error("empty window")]
    EmptyWindow,
    #[error("not a groupoid: {0}")]
    NotAGroupoid(String),
    #[error("cocycle undefined on composable pair ({0}, {1})")]
    UndefinedPair(usize, usize),
    #[error("cocycle identity violated on composable triple {0:?}")]
    CocycleViolated([usize; 3]),
    #[error("not normalized: {0}")]
    NotNormalized(String),
    #[error("groupoid is not a pair groupoid: {0}")]
    NotPairGroupoid(String),
    #[error("filtration is not nested at level {0}")]
    FiltrationNotNested(usize),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("elements belong to different groupoids")]
    GroupoidMismatch,
    #[error("mixed degrees: {0}")]
    MixedDegrees(String),
    #[error("zero norm: {0}")]
    ZeroNorm(String),
    #[error("value {0} is not a rational multiple of a single phase")]
    NotPurePhase(String),
    #[error("cocycle is not a bicharacter on the window degrees")]
    NotBicharacter,
    #[error("numerically singular matrix: {0}")]
    Singular(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
