use std::path::PathBuf;

/// Errors raised across the evaluation pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown sample id `{0}`")]
    UnknownSample(String),

    #[error("unknown marker `{0}`")]
    UnknownMarker(String),

    #[error("duplicate sample id `{0}`")]
    DuplicateSample(String),

    #[error("duplicate marker name `{0}`")]
    DuplicateMarker(String),

    #[error("duplicate verdict for sample `{sample}` and marker `{marker}`")]
    DuplicateEntry { sample: String, marker: String },

    #[error("invalid verdict {0}: expected -1, 0 or 1")]
    InvalidVerdict(i64),

    #[error("non-finite value for sample `{0}`")]
    NonFinite(String),

    #[error("{0}")]
    Domain(String),

    #[error("sample sets differ: `{0}` is present in one model but not the other")]
    MismatchedSamples(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
