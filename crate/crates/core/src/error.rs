use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid channel configuration: {field} = {value} ({reason})")]
    InvalidConfig {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("correlation coefficient {0} is outside [-1, 1]")]
    RhoOutOfRange(f64),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("matrix [[{m11}, {m12}], [{m12}, {m22}]] is not positive semidefinite")]
    NotPsd { m11: f64, m12: f64, m22: f64 },

    #[error("covariance allocation violates B1 + B2 <= K")]
    AllocationExceedsConstraint,

    #[error("rho_x is undefined for x = {x} with P1*P2 = {power_product}")]
    DegenerateRhoX { x: f64, power_product: f64 },

    #[error("maximize_min needs at least one function")]
    EmptyFunctionList,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("bound ordering violated at C = {c}: {detail}")]
    InvariantViolation { c: f64, detail: String },

    #[error("CSV schema mismatch: {0}")]
    Schema(String),

    #[error("config file line {line}: {reason}")]
    ConfigFile { line: usize, reason: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Schema(e.to_string())
    }
}
