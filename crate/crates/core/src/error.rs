use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("value {0} is outside the binary64 range")]
    FloatOverflow(String),

    #[error("non-finite float value {0}")]
    NonFinite(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("wrong matrix kind: expected {expected}, found {found}")]
    Kind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("radical product {0} does not resolve to a rational")]
    IrreducibleRadical(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix is not symmetric within tolerance at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },

    #[error("order {k} is out of range 1..={max}")]
    OrderOutOfRange { k: usize, max: usize },

    #[error("invalid minor selection: {0}")]
    Minor(String),

    #[error("dimension {n} exceeds the enumeration cap {cap}; pass the override to continue")]
    TooLarge { n: usize, cap: usize },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
