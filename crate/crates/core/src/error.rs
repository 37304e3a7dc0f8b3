use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DyadError {
    #[error("unknown node label `{0}`")]
    UnknownLabel(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("duplicate dyad ({0}, {1})")]
    DuplicateDyad(String, String),
    #[error("row {row} has {found} regressors, expected {expected}")]
    RaggedRegressors {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate node `{0}` in ordering")]
    DuplicateNode(String),
    #[error("order value for node `{0}` is not finite")]
    NonFiniteOrder(String),
    #[error("dataset is empty or has fewer rows ({rows}) than regressors ({cols})")]
    EmptyDataset { rows: usize, cols: usize },
    #[error("residual degrees of freedom are not positive (M = {rows}, K = {cols})")]
    DegenerateDof { rows: usize, cols: usize },
    #[error("contrast variance a'Va = {0:e} is not positive")]
    NonpositiveVariance(f64),
    #[error("contrast vector is zero or has wrong length")]
    InvalidContrast,
    #[error("block length {block} must be in 1..{nodes}")]
    BlockTooLong { block: usize, nodes: usize },
    #[error("need at least {needed} nodes, got {found}")]
    TooFewNodes { needed: usize, found: usize },
    #[error("unknown sweep parameter `{0}`")]
    UnknownParameter(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T, E = DyadError> = std::result::Result<T, E>;
