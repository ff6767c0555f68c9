use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge index {index} out of range (m = {m})")]
    EdgeIndexOutOfRange { index: usize, m: usize },

    #[error("edge {0} compared with itself")]
    SameEdge(usize),

    #[error("edge {0} contains a repeated vertex")]
    RepeatedVertex(usize),

    #[error("empty edge at index {0}")]
    EmptyEdge(usize),

    #[error("reduction would leave edge {0} empty")]
    ZeroEdge(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("instance too large: n = {n} exceeds the limit of {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("constraints are infeasible: edge {0} cannot be hit")]
    Infeasible(usize),

    #[error("search exceeded the node budget of {0}")]
    InstanceTooHard(u64),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("generation failed after {0} trials")]
    GenerationFailed(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown instance `{0}`")]
    UnknownInstance(String),

    #[error("invalid construction step {step}: {msg}")]
    InvalidStep { step: usize, msg: String },

    #[error("certificate does not replay to the given hypergraph")]
    CertificateMismatch,

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("edge {index} has size {size}, expected at least {min}")]
    EdgeTooSmall { index: usize, size: usize, min: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("bound violated: {0}")]
    BoundViolated(String),
}
