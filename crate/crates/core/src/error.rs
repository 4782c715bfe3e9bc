use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus title must not be empty")]
    EmptyTitle,
    #[error("unknown corpus `{0}`")]
    UnknownCorpus(String),
    #[error("unknown level `{0}`")]
    UnknownLevel(String),
    #[error("`{0}` names no corpus, level or resource")]
    UnknownSubject(String),
    #[error("unknown resource `{0}`")]
    UnknownResource(String),
    #[error("level id `{0}` is already registered")]
    DuplicateLevel(String),
    #[error("level `{level}` depends on unknown level `{target}`")]
    UnknownDependency { level: String, target: String },
    #[error("dependency cycle: {}", .0.join(" -> "))]
    DependencyCycle(Vec<String>),
    #[error("a resource must carry at least one description level")]
    NoLevel,
    #[error("level `{level}` does not belong to corpus `{corpus}`")]
    ForeignLevel { level: String, corpus: String },
    #[error("dangling pointer `{id}` in level `{level}`")]
    DanglingPointer { level: String, id: String },
    #[error("level `{0}` has no primary anchor: its closure ends without any form-carrying level")]
    NoPrimaryAnchor(String),
    #[error("invalid span expression `{expr}`: {reason}")]
    InvalidSpan { expr: String, reason: String },
    #[error("range `{from}..{to}` is reversed")]
    ReversedRange { from: String, to: String },
    #[error("range `{from}..{to}` crosses segmentations (`{from_level}` vs `{to_level}`)")]
    CrossLevelRange {
        from: String,
        to: String,
        from_level: String,
        to_level: String,
    },
    #[error("element {element} is misaligned: boundary at character offset {offset} falls inside reference unit `{unit}`")]
    Misalignment {
        element: String,
        offset: usize,
        unit: String,
    },
    #[error("text mismatch at character offset {offset}: expected `{expected}`, found `{found}`")]
    TextMismatch {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("cannot align token {token_index} (`{token}`) at reference unit {unit_index}")]
    Unalignable {
        token_index: usize,
        token: String,
        unit_index: usize,
    },
    #[error("parse error ({format}) at line {line}: {message}")]
    Parse {
        format: &'static str,
        line: usize,
        message: String,
    },
    #[error("{format}: element without `span` attribute at line {line}")]
    MissingSpan { format: &'static str, line: usize },
    #[error("link target `{0}` does not name a known markable")]
    UnknownTarget(String),
    #[error("duplicate markable id `{0}`")]
    DuplicateId(String),
    #[error("unknown format tag `{0}`")]
    UnknownFormat(String),
    #[error("unsupported manifest version `{0}`")]
    ManifestVersion(String),
    #[error("archive root {0} is not initialized")]
    NotInitialized(PathBuf),
    #[error("a validated first submission has no prior version to correct")]
    NoPriorVersion,
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest {path}: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(format: &'static str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            format,
            line,
            message: message.into(),
        }
    }
}
