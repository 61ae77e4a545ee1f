//! Quality measures, seed-set sampling and profile generators for
//! experiments.

mod generate;
mod metrics;
mod seeds;

pub use generate::{
    exponential_draws, generate_profiles, rescale_unit, top_singular_vectors, Incidence,
    ProfileScheme, SingularVectors,
};
pub use metrics::{avg_sq_weight, graph_avg_sq_weight, metrics, MetricBase, Metrics};
pub use seeds::{
    max_pairwise_hops, sample_seed_groups, GroupLabel, SeedGroup, DEFAULT_CANDIDATES,
    DEFAULT_PER_GROUP,
};
