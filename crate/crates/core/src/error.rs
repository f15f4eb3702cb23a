use thiserror::Error;

use crate::game::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("incompatible q: {q} is not a multiple of q_x = {qx} at vertex {vertex}")]
    IncompatibleQ { q: u64, qx: u64, vertex: VertexId },

    #[error("arc ({0}, {1}) is not an arc of the game")]
    UnknownArc(VertexId, VertexId),

    #[error("sink value {0} for arc ({1}, {2}) is outside [0, 1]")]
    SinkValueOutOfRange(String, VertexId, VertexId),

    #[error("not an improvement: {0}")]
    NotAnImprovement(String),

    #[error("rule violation in {rule}: {detail}")]
    RuleViolation { rule: String, detail: String },

    #[error("A is not a feedback arc set: cycle through vertex {0}")]
    NotFeedbackArcSet(VertexId),

    #[error("coverage condition unmet at random vertex {0}")]
    CoverageUnmet(VertexId),

    #[error("game has random vertex {0}; a deterministic game is required")]
    NotDeterministic(VertexId),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("strategy enumeration cap exceeded: {count} > {cap}; use a solver algorithm instead")]
    CapExceeded { count: u128, cap: u128 },

    #[error("not a q-SSG: {0}")]
    NotQSsg(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("rounding failed: {0}")]
    Rounding(String),

    #[error("iteration limit {0} reached")]
    IterationLimit(usize),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
