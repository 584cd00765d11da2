use thiserror::Error;

/// Errors raised by instance construction, characterization and schedule generation.
///
/// Transmitter and receiver indices in messages are 1-based, matching the
/// instance file format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("instance must have at least one transmitter")]
    EmptyInstance,

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("receiver {receiver} has no incoming link")]
    IsolatedReceiver { receiver: usize },

    #[error("duplicate link ({v},{w})")]
    DuplicateLink { v: usize, w: usize },

    #[error("unknown link ({v},{w})")]
    UnknownLink { v: usize, w: usize },

    #[error("affectance a({u},({v},{w})) = {value} outside [0,1]")]
    ValueOutOfRange { u: usize, v: usize, w: usize, value: f64 },

    #[error("self-affectance a({v},({v},{w})) must be 0, got {value}")]
    SelfAffectance { v: usize, w: usize, value: f64 },

    #[error("duplicate affectance entry for a({u},({v},{w}))")]
    DuplicateEntry { u: usize, v: usize, w: usize },

    #[error("receiver {receiver} violates the c bound: max average affectance {abar_w} > c*|F_w| = {bound}")]
    ConstraintViolated { receiver: usize, abar_w: f64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("receiver {receiver} has {relevant} relevant undecided transmitters, exact enumeration limit is {limit}")]
    Capacity { receiver: usize, relevant: usize, limit: usize },

    #[error("deterministic schedule did not terminate within {slots} slots ({pending} receivers pending)")]
    NonTermination { slots: usize, pending: usize },

    #[error("exhaustive search refused: n = {n} exceeds limit {limit}")]
    Budget { n: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
