#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tension_core::{Graph, NodeSet, ProfileMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    tension_core::synthetic::gnp(n, p, rng).unwrap()
}

/// G(n, p) with a random spanning tree added, so it is connected.
pub fn connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges: Vec<(usize, usize)> = random_graph(rng, n, p).edges().collect();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn uniform_profiles(rng: &mut ChaCha8Rng, n: usize, m: usize) -> ProfileMatrix {
    ProfileMatrix::new(n, m, (0..n * m).map(|_| rng.random::<f64>()).collect()).unwrap()
}

/// `k` distinct nodes drawn uniformly from `0..n`.
pub fn random_seeds(rng: &mut ChaCha8Rng, n: usize, k: usize) -> NodeSet {
    rand::seq::index::sample(rng, n, k).into_iter().collect()
}

/// Whether `u` induces a connected subgraph of `g`.
pub fn induces_connected(g: &Graph, u: &NodeSet) -> bool {
    let Some(root) = u.iter().next() else {
        return false;
    };
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![root];
    seen[root] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if u.contains(w) && !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == u.len()
}

/// Every connected node set containing `q`, by subset enumeration.
pub fn connected_supersets(g: &Graph, q: &NodeSet) -> Vec<NodeSet> {
    let n = g.node_count();
    assert!(n <= 16);
    let qmask: u32 = q.iter().map(|v| 1u32 << v).sum();
    (0u32..1 << n)
        .filter(|mask| mask & qmask == qmask)
        .map(|mask| (0..n).filter(|v| mask >> v & 1 == 1).collect::<NodeSet>())
        .filter(|u| induces_connected(g, u))
        .collect()
}
