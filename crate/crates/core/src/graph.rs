//! Undirected simple graphs over contiguous node ids.
//!
//! The graph itself is unweighted. Per-edge costs live in
//! [`EdgeWeights`](crate::weights::EdgeWeights) overlays aligned with the
//! adjacency lists.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Undirected graph with sorted, deduplicated adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `node_count` nodes. Reversed and repeated pairs are
    /// merged; self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (i, j) in edges {
            for node in [i, j] {
                if node >= node_count {
                    return Err(Error::InvalidNode { node, node_count });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub fn empty(node_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.node_count() && self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node,
                node_count: self.node_count(),
            })
        }
    }

    /// Component label per node; labels are assigned in order of the lowest
    /// node id of each component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &u in self.neighbors(v) {
                    if label[u] == usize::MAX {
                        label[u] = next;
                        queue.push_back(u);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Nodes of the largest connected component (lowest label wins ties).
    pub fn largest_component(&self) -> NodeSet {
        let label = self.components();
        let count = label.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &label {
            sizes[l] += 1;
        }
        let Some(best) = (0..count).max_by_key(|&l| (sizes[l], std::cmp::Reverse(l))) else {
            return NodeSet::default();
        };
        NodeSet::from_sorted_unchecked((0..label.len()).filter(|&v| label[v] == best).collect())
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || self.components().iter().all(|&l| l == 0)
    }

    /// Hop distances from `src`; unreachable nodes get `None`.
    pub fn bfs_hops(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &u in self.neighbors(v) {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// Sorted set of node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        NodeSet(members)
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        NodeSet(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, usize>> {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet::new(self.iter().chain(other.iter()).collect())
    }

    /// Membership mask of length `node_count`.
    pub fn mask(&self, node_count: usize) -> Vec<bool> {
        let mut mask = vec![false; node_count];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }

    pub fn check_within(&self, g: &Graph) -> Result<()> {
        self.iter().try_for_each(|v| g.check_node(v))
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        NodeSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Induced subgraph together with the map from its ids to the parent's ids.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `original[k]` is the parent id of local node `k`.
    pub original: Vec<usize>,
}

impl InducedSubgraph {
    pub fn local_id(&self, parent: usize) -> Option<usize> {
        self.original.binary_search(&parent).ok()
    }
}

/// The subgraph G(U) = (U, E(U)); local ids follow the sorted order of `u`.
pub fn induced_subgraph(g: &Graph, u: &NodeSet) -> Result<InducedSubgraph> {
    if u.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    u.check_within(g)?;
    let original = u.as_slice().to_vec();
    let mut local = vec![usize::MAX; g.node_count()];
    for (k, &v) in original.iter().enumerate() {
        local[v] = k;
    }
    let adjacency: Vec<Vec<usize>> = original
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                .collect()
        })
        .collect();
    let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
    Ok(InducedSubgraph {
        graph: Graph {
            adjacency,
            edge_count,
        },
        original,
    })
}

/// Whether every node of `q` lies in one component of the subgraph induced
/// by `alive`.
pub fn is_connected_within(g: &Graph, alive: &NodeSet, q: &NodeSet) -> Result<bool> {
    alive.check_within(g)?;
    if let Some(v) = q.iter().find(|&v| !alive.contains(v)) {
        return Err(Error::SeedOutsideCandidateSet(v));
    }
    let Some(root) = q.iter().next() else {
        return Ok(true);
    };
    let mask = alive.mask(g.node_count());
    Ok(reaches_all(g, &mask, root, q.as_slice()))
}

/// BFS from `root` restricted to `alive`, stopping once every target is seen.
pub(crate) fn reaches_all(g: &Graph, alive: &[bool], root: usize, targets: &[usize]) -> bool {
    let mut is_target = vec![false; g.node_count()];
    for &t in targets {
        is_target[t] = true;
    }
    let mut remaining = is_target.iter().filter(|&&t| t).count();
    let mut seen = vec![false; g.node_count()];
    seen[root] = true;
    if is_target[root] {
        remaining -= 1;
    }
    let mut queue = VecDeque::from([root]);
    while remaining > 0 {
        let Some(v) = queue.pop_front() else {
            return false;
        };
        for &u in g.neighbors(v) {
            if alive[u] && !seen[u] {
                seen[u] = true;
                if is_target[u] {
                    remaining -= 1;
                }
                queue.push_back(u);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn dedups_reversed_and_repeated_pairs() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn rejects_self_loops_and_bad_ids() {
        assert!(matches!(
            Graph::from_edges(3, [(1, 1)]),
            Err(Error::SelfLoop(1))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::InvalidNode { node: 3, .. })
        ));
    }

    #[test]
    fn induced_triangle_pair() {
        let g = cycle(3);
        let sub = induced_subgraph(&g, &NodeSet::new(vec![0, 1])).unwrap();
        assert_eq!(sub.graph.node_count(), 2);
        assert_eq!(sub.graph.edge_count(), 1);
    }

    #[test]
    fn induced_whole_graph_is_identity() {
        let g = cycle(6);
        let sub = induced_subgraph(&g, &(0..6).collect()).unwrap();
        assert_eq!(sub.graph, g);
        assert_eq!(sub.original, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn induced_five_cycle_alternate_nodes() {
        let g = cycle(5);
        let sub = induced_subgraph(&g, &NodeSet::new(vec![0, 2, 4])).unwrap();
        assert_eq!(sub.graph.node_count(), 3);
        let edges: Vec<_> = sub
            .graph
            .edges()
            .map(|(i, j)| (sub.original[i], sub.original[j]))
            .collect();
        assert_eq!(edges, vec![(0, 4)]);
    }

    #[test]
    fn induced_empty_set_errors() {
        assert!(matches!(
            induced_subgraph(&cycle(3), &NodeSet::default()),
            Err(Error::EmptyNodeSet)
        ));
    }

    #[test]
    fn connectivity_within_alive_set() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let q = NodeSet::new(vec![0, 2]);
        assert!(!is_connected_within(&path, &q, &q).unwrap());
        assert!(
            is_connected_within(&path, &NodeSet::new(vec![0]), &NodeSet::new(vec![0])).unwrap()
        );

        let c5 = cycle(5);
        let alive = NodeSet::new(vec![0, 1, 2, 3]);
        assert!(is_connected_within(&c5, &alive, &NodeSet::new(vec![0, 3])).unwrap());
    }

    #[test]
    fn connectivity_rejects_seed_outside_alive() {
        let c5 = cycle(5);
        let err = is_connected_within(&c5, &NodeSet::new(vec![0, 1]), &NodeSet::new(vec![0, 4]));
        assert!(matches!(err, Err(Error::SeedOutsideCandidateSet(4))));
    }

    #[test]
    fn largest_component_prefers_lowest_label_on_tie() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.largest_component().as_slice(), &[0, 1]);
        assert!(!g.is_connected());
    }
}
