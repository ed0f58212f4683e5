use thiserror::Error;

pub type Result<T> = std::result::Result<T, IrsError>;

#[derive(Debug, Error)]
pub enum IrsError {
    #[error("degenerate geometry: {first} and {second} coincide")]
    DegenerateGeometry {
        first: &'static str,
        second: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid override `{key}`: {reason}")]
    InvalidOverride { key: String, reason: String },

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("empty result table")]
    EmptyTable,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl IrsError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        IrsError::Domain(msg.into())
    }
}
