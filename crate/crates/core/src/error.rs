use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KcutError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {universe} vertices")]
    VertexOutOfRange { vertex: usize, universe: usize },
    #[error("total edge weight overflows 64 bits")]
    WeightOverflow,
    #[error("edge {0} not found")]
    EdgeNotFound(usize),
    #[error("cannot delete every vertex of the graph")]
    FullDeletion,
    #[error("partition parts overlap")]
    OverlappingParts,
    #[error("partition does not cover the vertex set exactly")]
    IncompleteCover,
    #[error("partition contains an empty part")]
    EmptyPart,
    #[error("forest edges contain a cycle")]
    CycleInForest,
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("need at least {needed} vertices, graph has {available}")]
    TooFewVertices { needed: usize, available: usize },
    #[error("invalid budget: s={s}, k={k}, forest has {forest_edges} edges and {components} components")]
    InvalidBudget {
        s: usize,
        k: usize,
        forest_edges: usize,
        components: usize,
    },
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: negative weight")]
    NegativeWeight { line: usize },
}

pub type Result<T, E = KcutError> = std::result::Result<T, E>;
