use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("record `{id}` (line {line}): label `{label}` is not in the declared label set")]
    UnknownLabel {
        id: String,
        line: usize,
        label: String,
    },

    #[error("record `{id}` (line {line}): duplicate id")]
    DuplicateId { id: String, line: usize },

    #[error("input contains no records")]
    EmptyCorpus,

    #[error("label set is empty")]
    EmptyLabelSet,

    #[error("empty sentence: text has no tokens")]
    EmptySentence,

    #[error("record `{id}`: field `{field}` has no tokens")]
    EmptyField { id: String, field: &'static str },

    #[error("tag lexicon line {line}: {reason}")]
    Lexicon { line: usize, reason: String },

    #[error("embeddings line {line}: {reason}")]
    Embeddings { line: usize, reason: String },

    #[error("similarity matrix line {line}: {reason}")]
    SimilarityMatrix { line: usize, reason: String },

    #[error("the external-matrix provider only scores sentences of the loaded corpus")]
    UnindexedSentence,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{component}: {reason}")]
    Precondition {
        component: &'static str,
        reason: String,
    },

    #[error("split absent: {0}")]
    SplitAbsent(String),

    #[error("weight vector has {got} entries, expected {expected}")]
    WeightMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
