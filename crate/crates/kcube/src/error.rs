use thiserror::Error;

/// Errors produced by torus construction, cut analysis, and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid torus parameters k={k}, n={n}: {reason}")]
    InvalidParams { k: u64, n: u32, reason: &'static str },

    #[error("digit {digit} at position {position} is out of range for radix {k}")]
    DigitOutOfRange { digit: u64, position: usize, k: u64 },

    #[error("expected {expected} digits, got {got}")]
    WrongDigitCount { expected: u32, got: usize },

    #[error("vertex code {code} is out of range for a torus with {count} vertices")]
    VertexOutOfRange { code: u64, count: u64 },

    #[error("vertex sets belong to different tori (k={left_k}, n={left_n} vs k={right_k}, n={right_n})")]
    TorusMismatch {
        left_k: u64,
        left_n: u32,
        right_k: u64,
        right_n: u32,
    },

    #[error("operation requires two distinct vertices")]
    IdenticalVertices,

    #[error("dimension {dim} is out of range 1..={n}")]
    DimensionOutOfRange { dim: u32, n: u32 },

    #[error("vertices {u} and {v} are not adjacent")]
    NotAnEdge { u: u64, v: u64 },

    #[error("invalid two-edge path: {reason}")]
    InvalidPath { reason: &'static str },

    #[error("{op} is not supported here: requires {requires}")]
    Unsupported { op: &'static str, requires: &'static str },

    #[error("no closed form for h={h} on a torus with k={k}, n={n}")]
    FormulaUnavailable { k: u64, n: u32, h: u32 },

    #[error("the graph is complete, so no vertex subset disconnects it")]
    CompleteGraph,

    #[error("no search budget: pass a maximum cut size when no closed form applies")]
    BudgetRequired,

    #[error("invalid search configuration: {reason}")]
    InvalidConfig { reason: &'static str },

    #[error("failed to start worker pool: {detail}")]
    PoolBuild { detail: String },

    #[error("search refused: {what} {amount} exceeds the ceiling {ceiling}")]
    CeilingExceeded {
        what: &'static str,
        amount: u128,
        ceiling: u128,
    },

    #[error("fault count {faults} must be smaller than the vertex count {count}")]
    TooManyFaults { faults: u64, count: u64 },

    #[error("no trial satisfied the sampling condition, so the estimate is undefined")]
    ConditionStarved,

    #[error("worker count must be at least 1")]
    NoWorkers,
}

pub type Result<T> = std::result::Result<T, Error>;
