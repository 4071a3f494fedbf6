use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a tree ({vertices} vertices, {edges} edges, connected: {connected})")]
    NotATree {
        vertices: usize,
        edges: usize,
        connected: bool,
    },

    #[error("vertex set must not be empty")]
    EmptyVertexSet,

    #[error("vertex {0} is not a member of the given vertex set")]
    NotInVertexSet(usize),

    #[error("distance table has no entry for source {source_vertex}")]
    MissingDistance { source_vertex: usize },

    #[error("anchor vertices of a subtree must differ (got {0} twice)")]
    DegenerateSubtree(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no connected sample after {0} attempts")]
    RetryBudgetExhausted(usize),

    #[error("cascade from {source_vertex} has no time for vertex {vertex}")]
    MissingTime { source_vertex: usize, vertex: usize },

    #[error("cascade sources differ ({0} vs {1})")]
    SourceMismatch(usize, usize),

    #[error("need {needed} scorable pairs but only {available} are available ({excluded} excluded by support threshold)")]
    InsufficientPairs {
        needed: usize,
        available: usize,
        excluded: usize,
    },

    #[error("score tables cover different vertex universes ({0} vs {1})")]
    UniverseMismatch(usize, usize),

    #[error("no cascades given")]
    NoCascades,

    #[error("unsupported moment order {order} for {family}")]
    UnsupportedMoment { order: u32, family: String },

    #[error("removing edge ({0}, {1}) disconnects the graph")]
    BridgeEdge(usize, usize),

    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
