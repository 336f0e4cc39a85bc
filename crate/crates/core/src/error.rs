use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("frame error: {0}")]
    Frame(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("size error: need at least {need} samples, got {got}")]
    Size { need: usize, got: usize },
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("split error: {0}")]
    Split(String),
    #[error("scenario {id}: {source}")]
    Scenario {
        id: u64,
        #[source]
        source: Box<Error>,
    },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_scenario(self, id: u64) -> Self {
        Error::Scenario { id, source: Box::new(self) }
    }

    /// True for failures caused by the filesystem rather than by inputs.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            Error::Scenario { source, .. } => source.is_io(),
            _ => false,
        }
    }

    /// True for errors that stem from bad user input or configuration.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Config(_)
            | Error::Parameter(_)
            | Error::Input(_)
            | Error::Schema(_)
            | Error::Split(_)
            | Error::Json(_) => true,
            Error::Scenario { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}
