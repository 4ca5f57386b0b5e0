use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("cannot promote conductor {from} to {to}: not a multiple")]
    BadPromotion { from: u64, to: u64 },
    #[error("character modulo {0} is not primitive")]
    NonPrimitive(u64),
    #[error("pole: {d} is divisible by {u}")]
    Pole { d: i64, u: u64 },
    #[error("series is zero to precision {0}")]
    ZeroSeries(i64),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("no solution in search box")]
    NoSolution,
    #[error("invalid generator: {0}")]
    Generator(String),
    #[error("no generator supplies pole order {0}")]
    MissingPoleOrder(u64),
    #[error("gap condition violated: {0}")]
    GapViolation(String),
    #[error("identity check failed: {0}")]
    Residual(String),
    #[error("singular linear system")]
    Singular,
    #[error("series is not monic: {0}")]
    NonMonic(String),
    #[error("cusp orders missing or inconsistent: {0}")]
    CuspOrders(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numeric evaluation failed: {0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
