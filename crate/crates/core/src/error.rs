use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("exponent overflow: exponents are capped at {}", crate::polyring::MAX_EXPONENT)]
    ExponentOverflow,

    #[error("ring or variable mismatch: {0}")]
    RingMismatch(String),

    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),

    #[error("no canonical map from {from} to {to}")]
    NoCanonicalMap { from: String, to: String },

    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("division is not exact")]
    InexactDivision,

    #[error("ideal quotient by the zero polynomial")]
    QuotientByZero,

    #[error("function vanishes identically on the patch (it lies in the patch ideal)")]
    VanishesIdentically,

    #[error("invalid locus: {0}")]
    InvalidLocus(String),

    #[error("invalid special fibre: {}", .0.join("; "))]
    InvalidFibre(Vec<String>),

    #[error("special fibre is disconnected; the component group is infinite")]
    DisconnectedFibre,

    #[error("incompatible orbit data: {0}")]
    IncompatibleOrbit(String),

    #[error("values do not span a discrete subgroup of the reals: {0}")]
    NonDiscrete(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("basis adjustment did not terminate within {0} steps")]
    Divergence(usize),

    #[error("no usable sample points: every point is killed by a denominator")]
    NoSamplePoints,

    #[error("polynomial is not squarefree modulo {0}")]
    NotSquarefree(String),

    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema error: {0}")]
    Schema(String),
}
