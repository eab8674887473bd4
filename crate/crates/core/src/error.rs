use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("gate targets must be distinct, got {0:?}")]
    DuplicateTargets(Vec<usize>),

    #[error("register of {requested} qubits exceeds the engine bound of {max}")]
    TooManyQubits { requested: usize, max: usize },

    #[error("register must hold at least one qubit")]
    EmptyRegister,

    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),

    #[error("state is not normalised (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("mixture weights must be non-negative and sum to 1 (sum = {0})")]
    BadWeights(f64),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("forced measurement branch has zero probability")]
    ZeroProbabilityBranch,

    #[error("qubit {0} is not in product form and cannot be removed")]
    NotProduct(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("gate {0} cannot be realised with angles in multiples of pi/4")]
    Unrepresentable(String),

    #[error("gate {0} is not a Clifford gate")]
    NotClifford(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("out-of-order delivery: {0}")]
    Ordering(String),

    #[error("channel topology violation: {0}")]
    Topology(String),

    #[error("quantum registry: {0}")]
    Registry(String),

    #[error("audit refused: {0}")]
    Audit(String),

    #[error("trap insertion failed: {0}")]
    Traps(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("wire format: {0}")]
    Wire(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
