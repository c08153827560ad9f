use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is bipartite")]
    Bipartite,
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph is not unicyclic")]
    NotUnicyclic,
    #[error("vertex {0} has odd degree")]
    OddDegree(usize),
    #[error("graph is not regular")]
    NotRegular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bipartite balance condition violated")]
    BalanceViolated,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("enumeration budget exceeded")]
    BudgetExceeded,
    #[error("instance is infeasible")]
    Infeasible,
    #[error("demand out of range at vertex {0}")]
    DemandOutOfRange(usize),
    #[error("the 5-regular 0-sum 3-flow case is an open conjecture")]
    Conjecture,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
