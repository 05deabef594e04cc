use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("empty training corpus")]
    EmptyTrainingCorpus,

    #[error("tagger model is empty or untrained")]
    UntrainedModel,

    #[error("unknown UPOS tag {0:?}")]
    UnknownTag(String),

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("caption {caption_id}: sidecar has {found} tokens but caption text tokenizes to {expected}")]
    TokenCountMismatch {
        caption_id: String,
        expected: usize,
        found: usize,
    },

    #[error("caption {0} is not present in the corpus")]
    UnknownCaption(String),

    #[error("caption {0} has no tags")]
    MissingTags(String),

    #[error("no replacement candidates left for token {token:?}")]
    EmptyCandidatePool { token: String },

    #[error("replacement tasks require a replacement vocabulary")]
    MissingVocab,

    #[error("unknown task id {0:?}")]
    UnknownTask(String),

    #[error("no records")]
    NoRecords,

    #[error("unknown split {0:?}")]
    UnknownSplit(String),

    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),

    #[error("caption {caption_id} references missing video {video_id}")]
    MissingVideo { caption_id: String, video_id: String },

    #[error("duplicate caption id {0}")]
    DuplicateCaption(String),

    #[error("digest mismatch: manifest says {expected}, content hashes to {found}")]
    DigestMismatch { expected: String, found: String },

    #[error("bad magic")]
    BadMagic,

    #[error("unsupported version {0}")]
    UnsupportedVersion(u32),

    #[error("unsupported dtype {0}")]
    UnsupportedDtype(u8),

    #[error("non-finite value in row {id}")]
    NonFinite { id: String },

    #[error("duplicate id {0}")]
    DuplicateId(String),

    #[error("truncated embedding file")]
    Truncated,

    #[error("invalid embedding file: {0}")]
    InvalidEmbedding(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("missing ids: {}", .0.join(", "))]
    MissingIds(Vec<String>),

    #[error("empty rank list")]
    EmptyRanks,

    #[error("run {0} has no baseline (original) report")]
    MissingBaseline(String),

    #[error("unknown format {0:?}")]
    UnknownFormat(String),

    #[error("no input to report")]
    EmptyInput,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_) => ErrorKind::Io,
            Error::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => ErrorKind::Io,
            Error::UnknownTask(_)
            | Error::UnknownSplit(_)
            | Error::UnknownDataset(_)
            | Error::UnknownFormat(_)
            | Error::Config(_) => ErrorKind::Usage,
            _ => ErrorKind::Data,
        }
    }
}
