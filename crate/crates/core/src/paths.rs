//! Single-source shortest paths with deterministic path selection.
//!
//! Among all minimum-length paths the walk prefers the fewest hops, then the
//! lexicographically smallest node sequence read from the source.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weights::EdgeWeights;

#[derive(Debug, Clone, Copy)]
pub enum Lengths<'a> {
    /// Every edge has length one.
    Unit,
    Weighted(&'a EdgeWeights),
}

impl Lengths<'_> {
    fn edge(&self, v: usize, k: usize) -> f64 {
        match self {
            Lengths::Unit => 1.0,
            Lengths::Weighted(w) => w.incident(v)[k],
        }
    }
}

/// Simple path as an ordered node list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn edge_count(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

const UNREACHED: u32 = u32::MAX;

/// Distances (and hop counts of the shortest such paths) towards one root.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    root: usize,
    dist: Vec<f64>,
    hops: Vec<u32>,
}

impl ShortestPathTree {
    /// Runs BFS (unit lengths) or Dijkstra from `root`. With `targets`, the
    /// search stops once every target is settled; paths from any settled
    /// target back to the root are still exact.
    pub fn build(g: &Graph, lengths: Lengths<'_>, root: usize, targets: Option<&[usize]>) -> Self {
        let n = g.node_count();
        let mut pending = vec![false; n];
        let mut remaining = 0usize;
        if let Some(ts) = targets {
            for &t in ts {
                if !pending[t] {
                    pending[t] = true;
                    remaining += 1;
                }
            }
        } else {
            remaining = usize::MAX;
        }
        let mut tree = ShortestPathTree {
            root,
            dist: vec![f64::INFINITY; n],
            hops: vec![UNREACHED; n],
        };
        tree.dist[root] = 0.0;
        tree.hops[root] = 0;
        match lengths {
            Lengths::Unit => tree.bfs(g, &mut pending, remaining),
            Lengths::Weighted(_) => tree.dijkstra(g, lengths, &mut pending, remaining),
        }
        tree
    }

    fn bfs(&mut self, g: &Graph, pending: &mut [bool], mut remaining: usize) {
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            if pending[v] {
                pending[v] = false;
                remaining -= 1;
                if remaining == 0 {
                    return;
                }
            }
            let h = self.hops[v] + 1;
            for &u in g.neighbors(v) {
                if self.hops[u] == UNREACHED {
                    self.hops[u] = h;
                    self.dist[u] = h as f64;
                    queue.push_back(u);
                }
            }
        }
    }

    fn dijkstra(
        &mut self,
        g: &Graph,
        lengths: Lengths<'_>,
        pending: &mut [bool],
        mut remaining: usize,
    ) {
        let mut settled = vec![false; g.node_count()];
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((OrderedFloat(0.0), 0u32, self.root)));
        while let Some(Reverse((OrderedFloat(d), h, v))) = heap.pop() {
            if settled[v] {
                continue;
            }
            settled[v] = true;
            if pending[v] {
                pending[v] = false;
                remaining -= 1;
                if remaining == 0 {
                    return;
                }
            }
            for (k, &u) in g.neighbors(v).iter().enumerate() {
                if settled[u] {
                    continue;
                }
                let nd = d + lengths.edge(v, k);
                let nh = h + 1;
                if (nd, nh) < (self.dist[u], self.hops[u]) {
                    self.dist[u] = nd;
                    self.hops[u] = nh;
                    heap.push(Reverse((OrderedFloat(nd), nh, u)));
                }
            }
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn distance(&self, v: usize) -> Option<f64> {
        (self.hops[v] != UNREACHED).then_some(self.dist[v])
    }

    pub fn hops(&self, v: usize) -> Option<usize> {
        (self.hops[v] != UNREACHED).then_some(self.hops[v] as usize)
    }

    /// Path from `from` to the root, choosing the smallest admissible next
    /// node at every step.
    pub fn path_from(&self, g: &Graph, lengths: Lengths<'_>, from: usize) -> Option<Path> {
        if self.hops[from] == UNREACHED {
            return None;
        }
        let mut nodes = vec![from];
        let mut v = from;
        while v != self.root {
            let next = g.neighbors(v).iter().enumerate().find_map(|(k, &u)| {
                let on_path = self.hops[u] != UNREACHED
                    && self.hops[u] + 1 == self.hops[v]
                    && self.dist[u] + lengths.edge(v, k) == self.dist[v];
                on_path.then_some(u)
            })?;
            nodes.push(next);
            v = next;
        }
        Some(Path(nodes))
    }
}

/// Minimum-length path from `src` to `dst` and its length.
pub fn shortest_path(
    g: &Graph,
    src: usize,
    dst: usize,
    lengths: Lengths<'_>,
) -> Result<(Path, f64)> {
    g.check_node(src)?;
    g.check_node(dst)?;
    if let Lengths::Weighted(w) = lengths {
        w.check_aligned(g)?;
    }
    let tree = ShortestPathTree::build(g, lengths, dst, Some(&[src]));
    let path = tree
        .path_from(g, lengths, src)
        .ok_or(Error::DisconnectedPair { src, dst })?;
    let length = tree.distance(src).unwrap_or(f64::INFINITY);
    Ok((path, length))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weighted_square() -> (Graph, EdgeWeights) {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let w = EdgeWeights::from_fn(&g, |i, j| match (i, j) {
            (0, 1) | (1, 2) => 0.1,
            _ => 0.9,
        });
        (g, w)
    }

    #[test]
    fn path_graph_unit() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (p, len) = shortest_path(&g, 0, 2, Lengths::Unit).unwrap();
        assert_eq!(p.nodes(), &[0, 1, 2]);
        assert_eq!(len, 2.0);
    }

    #[test]
    fn same_endpoint() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (p, len) = shortest_path(&g, 1, 1, Lengths::Unit).unwrap();
        assert_eq!(p.nodes(), &[1]);
        assert_eq!(len, 0.0);
    }

    #[test]
    fn weighted_square_takes_light_side() {
        let (g, w) = weighted_square();
        let (p, len) = shortest_path(&g, 0, 2, Lengths::Weighted(&w)).unwrap();
        assert_eq!(p.nodes(), &[0, 1, 2]);
        assert!((len - 0.2).abs() < 1e-15);
    }

    #[test]
    fn unit_ties_pick_lexicographic_sequence() {
        let (g, _) = weighted_square();
        let (p, _) = shortest_path(&g, 0, 2, Lengths::Unit).unwrap();
        assert_eq!(p.nodes(), &[0, 1, 2]);
        let (p, _) = shortest_path(&g, 2, 0, Lengths::Unit).unwrap();
        assert_eq!(p.nodes(), &[2, 1, 0]);
    }

    #[test]
    fn zero_weights_prefer_fewer_hops() {
        // 0-1-2-3 all zero weight plus a zero-weight chord 0-3.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let w = EdgeWeights::uniform(&g, 0.0);
        let (p, len) = shortest_path(&g, 0, 3, Lengths::Weighted(&w)).unwrap();
        assert_eq!(p.nodes(), &[0, 3]);
        assert_eq!(len, 0.0);
    }

    #[test]
    fn unreachable_is_an_error() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(
            shortest_path(&g, 0, 2, Lengths::Unit),
            Err(Error::DisconnectedPair { src: 0, dst: 2 })
        ));
    }
}
