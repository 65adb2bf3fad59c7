use thiserror::Error;

/// Errors raised by model construction, estimators and optimizers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported constellation: {order}-{scheme}")]
    UnsupportedConstellation { order: usize, scheme: String },

    #[error("index out of range: {what} = {index}, limit {limit}")]
    IndexOutOfRange { what: &'static str, index: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("legitimate channel has an empty null space ({n_tx} transmit vs {n_rx} receive antennas)")]
    EmptyNullSpace { n_tx: usize, n_rx: usize },

    #[error("legitimate channel is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("initial precoder must be nonzero")]
    ZeroPrecoder,

    #[error("matrix is outside the feasible set: {0}")]
    Infeasible(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("non-finite result: {0}")]
    NonFinite(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by ill-conditioned numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. } | Error::NotPositiveDefinite { .. } | Error::NonFinite(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
