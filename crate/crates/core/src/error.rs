use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown {kind}: {name}")]
    Lookup { kind: &'static str, name: String },
    #[error("word {0:?} is not in the skill vocabulary")]
    OutOfVocabulary(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("learning-progress schedule error: {0}")]
    Schedule(String),
    #[error("goal {0:?} cannot be made n-compositional")]
    NotComposable(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn lookup(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Lookup { kind, name: name.into() }
    }
}
