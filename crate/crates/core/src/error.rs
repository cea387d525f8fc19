use thiserror::Error;

/// Errors produced anywhere in the measurement pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: expected header `country,indicator,year,value`, found `{found}`")]
    Header { line: usize, found: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate observation for ({country}, {indicator}, {year})")]
    DuplicateKey {
        country: String,
        indicator: String,
        year: i32,
    },

    #[error("line {line}: unknown indicator key `{indicator}`")]
    Schema { line: usize, indicator: String },

    #[error("country `{country}` has no observations for indicator `{indicator}`")]
    MissingIndicator { country: String, indicator: String },

    #[error("weights for `{indicator}` of `{country}` sum to zero over the available years")]
    DegenerateWeights { country: String, indicator: String },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid year range: {0}")]
    InvalidYears(String),

    #[error("factor at position {position} is negative ({value})")]
    NegativeFactor { position: usize, value: f64 },

    #[error("factor at position {position} is zero")]
    ZeroFactor { position: usize },

    #[error("factor at position {position} is not finite")]
    NonFiniteFactor { position: usize },

    #[error("`{country}` / `{indicator}`: {source}")]
    Factor {
        country: String,
        indicator: String,
        source: Box<Error>,
    },

    #[error("no factors remain after applying the zero policy")]
    EmptyAfterPolicy,

    #[error("factor list is empty")]
    EmptyFactors,

    #[error("zero-policy epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("component `{component}` = {value} is out of range")]
    OutOfRange { component: String, value: f64 },

    #[error("value at index {index} is not positive ({value})")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("value at index {index} is not finite")]
    NonFiniteValue { index: usize },

    #[error("series lengths differ (x: {x}, y: {y}, labels: {labels})")]
    LengthMismatch { x: usize, y: usize, labels: usize },

    #[error("at least 3 points are required, got {0}")]
    TooFewPoints(usize),

    #[error("regressor has zero variance")]
    DegenerateRegressor,

    #[error("series `{0}` has zero variance")]
    DegenerateSeries(&'static str),

    #[error("|r| = 1: the t-statistic is infinite (perfect fit)")]
    InfiniteStatistic,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("nothing to report: the input contains no countries")]
    EmptyReport,

    #[error("bundled fixture integrity failure: {0}")]
    Integrity(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
