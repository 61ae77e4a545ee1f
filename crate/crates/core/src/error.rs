use thiserror::Error;

use crate::profiles::ProfileMatrix;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Last state of a conformation run that hit its iteration budget.
#[derive(Debug, Clone)]
pub struct Unconverged {
    pub last: ProfileMatrix,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty node set")]
    EmptyNodeSet,

    #[error("node {node} out of range for graph with {node_count} nodes")]
    InvalidNode { node: usize, node_count: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("disconnected pair: no path from {src} to {dst}")]
    DisconnectedPair { src: usize, dst: usize },

    #[error("seeds in different components")]
    SeedsDisconnected,

    #[error("seed {0} outside candidate set")]
    SeedOutsideCandidateSet(usize),

    #[error("node set does not induce a connected subgraph")]
    DisconnectedNodeSet,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "conformation did not converge after {} iterations (residual {:e})",
        .0.iterations,
        .0.residual
    )]
    NotConverged(Box<Unconverged>),

    #[error("uncoverable skill: {0}")]
    UncoverableSkill(String),

    #[error("no edges in node set")]
    NoEdges,

    #[error("degenerate profile distribution: average squared edge weight is zero")]
    DegenerateProfiles,

    #[error("component too small: need {needed} nodes, largest component has {available}")]
    ComponentTooSmall { needed: usize, available: usize },

    #[error("requested {requested} eigenvectors but only {available} are available")]
    TooFewEigenvectors { requested: usize, available: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
