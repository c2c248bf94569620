use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("linear size {0} is odd; a perfect matching needs an even vertex count per row")]
    OddSize(usize),
    #[error("linear size {0} is below the minimum of 2")]
    TooSmall(usize),
    #[error("unknown lattice kind `{0}` (expected H, Q or T)")]
    UnknownKind(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error("the graph (minus forbidden edges) has no perfect matching")]
    NoPerfectMatching,
    #[error("edge {edge} has non-finite or out-of-range effective weight {weight}")]
    NonFiniteWeight { edge: usize, weight: f64 },
    #[error("brute force is limited to {limit} vertices, graph has {vertices}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("weight array has {found} entries for {expected} edges")]
    WeightCount { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("exact counting supports min(m, n) <= {limit}, got {m} x {n}")]
    TooLarge { m: usize, n: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObservableError {
    #[error("vertex {vertex} has degree {degree} in the symmetric difference")]
    MalformedMatching { vertex: usize, degree: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),
    #[error("fit did not converge: {0}")]
    NonConvergence(String),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read configuration file {path}: {source}")]
    ConfigFile {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: malformed record: {message}")]
    Record {
        path: std::path::PathBuf,
        line: usize,
        message: String,
    },
    #[error("output directory was produced by a different configuration (hash {found}, expected {expected})")]
    ConfigMismatch { expected: String, found: String },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Failure while processing one instance of an experiment.
#[derive(Debug, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
