//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // domain
    #[error("invalid benchmark item `{id}`: {problems:?}")]
    InvalidItem { id: String, problems: Vec<String> },

    // gateway
    #[error("transport error talking to `{endpoint}`: {detail}")]
    Transport { endpoint: String, detail: String },
    #[error("backend returned status {status}: {body}")]
    BackendError { status: u16, body: String },
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("backend `{backend}` does not return continuation logprobs")]
    ScoringUnsupported { backend: String },
    #[error("gateway is offline and request {digest} is not cached")]
    Offline { digest: String },
    #[error("empty prompt passed to generate")]
    EmptyPrompt,
    #[error("empty continuation passed to score_tokens")]
    EmptyContinuation,
    #[error("role mismatch: expected {expected}, profile has {actual}")]
    RoleMismatch { expected: String, actual: String },
    #[error("no scripted reply for prompt starting {prompt_head:?}")]
    NoScriptedReply { prompt_head: String },

    // decomposer
    #[error("empty reasoning text")]
    EmptyReasoning,
    #[error("decomposition reply matched no grammar: {detail}")]
    UnparseableDecomposition { detail: String },
    #[error("decomposition produced {got} steps, cap is {cap}")]
    StepOverflow { got: usize, cap: usize },
    #[error("template `{name}` invalid: {detail}")]
    BadTemplate { name: String, detail: String },

    // infogain
    #[error("token count must be >= 1, got {n}")]
    InvalidN { n: i64 },
    #[error("trace has no steps")]
    NoSteps,
    #[error("token count changed across prefixes: established {established}, got {got} at prefix {prefix}")]
    NMismatch {
        established: usize,
        got: usize,
        prefix: usize,
    },

    // corpus
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("duplicate passage id `{id}`")]
    DuplicateId { id: String },
    #[error("k must be >= 1, got {k}")]
    InvalidK { k: usize },
    #[error("empty query")]
    EmptyQuery,

    // verifier
    #[error("extraction reply missing statement/query fields: {detail}")]
    UnparseableExtraction { detail: String },
    #[error("judge reply has no leading true/false verdict: {reply_head:?}")]
    JudgeUnparseable { reply_head: String },
    #[error("no verdicts to average")]
    NoVerdicts,

    // runner
    #[error("benchmark file format error at line {line}: {detail}")]
    FormatError { line: usize, detail: String },
    #[error("benchmark file contains no items")]
    EmptyBenchmark,
    #[error("no recognizable answer in subject reply")]
    NoAnswerFound,
    #[error("run exceeded failure budget: {failed} of {total} items quarantined")]
    FailureBudgetExceeded { failed: usize, total: usize },

    // filter
    #[error("example `{id}` is ungradeable: {reason}")]
    UngradeableExample { id: String, reason: String },
    #[error("no difficulty score for example `{id}`")]
    MissingDifficulty { id: String },
    #[error("sample count m must be >= 1")]
    InvalidSampleCount,

    // cache
    #[error("cache conflict for digest {digest}: second put with different bytes")]
    CacheConflict { digest: String },

    // analytics
    #[error("no records to aggregate")]
    EmptyRecords,
    #[error("degenerate input for correlation: {detail}")]
    DegenerateInput { detail: String },

    // config / io
    #[error("config error at `{path}`: {detail}")]
    Config { path: String, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
