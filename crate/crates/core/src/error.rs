use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {0} is not in the graph")]
    UnknownNode(usize),
    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(usize, usize),
    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: usize, v: usize, reason: &'static str },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(&'static str),
    #[error("{what} is {size}, above the enumeration cap of {cap}")]
    SizeLimit { what: &'static str, size: u128, cap: u128 },
    #[error("not a minimum spanning forest of the graph")]
    NotAnMst,
    #[error("invalid config: {0}")]
    Config(String),
    #[error("sample size {requested} exceeds the {available} available nodes")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("graph has no node coordinates")]
    MissingCoords,
    #[error("length mismatch: {0} scores vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 defined values to summarize, got {0}")]
    TooFewValues(usize),
    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
