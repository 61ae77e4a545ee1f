//! Random graph and incidence generators for experiments and tests.

use rand::Rng;

use crate::error::{Error, Result};
use crate::evaluation::Incidence;
use crate::graph::Graph;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "edge probability {p} outside [0, 1]"
        )))
    }
}

/// Erdős–Rényi G(n, p).
pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    check_probability(p)?;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// A graph with planted communities and the community of each node.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: Graph,
    pub community: Vec<usize>,
}

/// Nodes are split round-robin into `communities` groups; pairs inside a
/// group connect with probability `p_in`, pairs across with `p_out`.
pub fn planted_partition<R: Rng>(
    n: usize,
    communities: usize,
    p_in: f64,
    p_out: f64,
    rng: &mut R,
) -> Result<PlantedGraph> {
    check_probability(p_in)?;
    check_probability(p_out)?;
    if communities == 0 {
        return Err(Error::InvalidInput("need at least one community".into()));
    }
    let community: Vec<usize> = (0..n).map(|v| v % communities).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if community[i] == community[j] {
                p_in
            } else {
                p_out
            };
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Ok(PlantedGraph {
        graph: Graph::from_edges(n, edges)?,
        community,
    })
}

/// Keyword incidence aligned with a community assignment. Each community
/// owns `per_community` features; a node draws `draws` keywords, each from
/// its own community's features with probability `p_own`, otherwise from
/// the whole vocabulary.
pub fn planted_incidence<R: Rng>(
    community: &[usize],
    per_community: usize,
    draws: usize,
    p_own: f64,
    rng: &mut R,
) -> Result<Incidence> {
    check_probability(p_own)?;
    let blocks = community.iter().max().map_or(0, |&c| c + 1);
    let vocabulary = blocks * per_community;
    if vocabulary == 0 {
        return Err(Error::InvalidInput("empty vocabulary".into()));
    }
    let features = (0..vocabulary).map(|f| format!("k{f}")).collect();
    let mut entries = Vec::with_capacity(community.len() * draws);
    for (node, &c) in community.iter().enumerate() {
        for _ in 0..draws {
            let f = if rng.random_bool(p_own) {
                c * per_community + rng.random_range(0..per_community)
            } else {
                rng.random_range(0..vocabulary)
            };
            entries.push((node, f, 1.0));
        }
    }
    Incidence::new(community.len(), features, entries)
}
