//! Community search and team formation that keep social tension low.
//!
//! Every node carries a latent profile; under repeated averaging with its
//! neighbours it settles on a conformed profile. The gap between the two,
//! plus the gaps between neighbours, is the tension of a node set. The
//! search routines connect a set of seed nodes (or cover a set of skills)
//! while keeping that tension small.

pub mod community;
pub mod conformation;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod io;
pub mod mst;
pub mod paths;
pub mod profiles;
pub mod rng;
pub mod synthetic;
pub mod team;
pub mod weights;

pub use community::{
    evaluate_solution, find_community, proxy_weights, qpeel, qpeel_with_stats, qtree,
    qtree_connector, Connector, PathLength, PeelScore, PeelStats, Solution, Variant, WeightNorm,
};
pub use conformation::{
    conform, equilibrium_solve, fixed_point_residual, node_tension, social_tension,
    social_tension_by_edges, ConformOptions, ConformationResult,
};
pub use error::{Error, Result};
pub use graph::{induced_subgraph, is_connected_within, Graph, InducedSubgraph, NodeSet};
pub use profiles::ProfileMatrix;
pub use team::{
    extended_graph, greedy_cardinality, tteam, ExtendedGraph, Project, SkillMap, TeamOutcome,
};
pub use weights::EdgeWeights;
