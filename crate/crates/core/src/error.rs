use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("resolution error: {what} = {value} is below the grid limit {limit}")]
    Resolution { what: String, value: f64, limit: f64 },

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("wrap-around budget exceeded at t = {t}: grid length {length} < required {required}")]
    WrapAround { t: f64, length: f64, required: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("mixed geometry inside the symbol support: {0}")]
    MixedGeometry(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("accuracy failure: error estimate {estimate:.3e} above target {target:.3e}")]
    Accuracy { estimate: f64, target: f64 },

    #[error("under-resolved: {what} = {given} is below the minimum {minimum}")]
    UnderResolved { what: String, given: usize, minimum: usize },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
