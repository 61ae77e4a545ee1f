//! Seeded community search: connect a seed set with a low-tension subgraph.
//!
//! Two search strategies work on proxy edge weights derived from latent
//! profiles. [`qtree`] joins the seeds with a metric-closure spanning tree
//! (optimistic: induced extra edges are not controlled). [`qpeel`] starts
//! from the whole graph and peels expensive nodes while the seeds stay
//! connected (pessimistic). Exact tension is computed once, on the final
//! node set, by [`evaluate_solution`].

use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use ordered_float::OrderedFloat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformation::{conform, social_tension, ConformOptions};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, NodeSet};
use crate::mst::minimum_spanning_tree;
use crate::paths::{Lengths, ShortestPathTree};
use crate::profiles::ProfileMatrix;
use crate::weights::EdgeWeights;

/// How multi-attribute latent differences collapse into one edge weight.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum WeightNorm {
    #[default]
    L2,
    L1,
    Max,
}

impl FromStr for WeightNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l2" => Ok(WeightNorm::L2),
            "l1" => Ok(WeightNorm::L1),
            "max" | "linf" => Ok(WeightNorm::Max),
            other => Err(Error::InvalidInput(format!(
                "unknown weight norm '{other}'"
            ))),
        }
    }
}

/// Proxy weight of every edge: the latent-profile distance of its endpoints.
/// With one attribute every norm reduces to `|x_i - x_j|`.
pub fn proxy_weights(g: &Graph, latent: &ProfileMatrix, norm: WeightNorm) -> Result<EdgeWeights> {
    latent.check_rows(g.node_count())?;
    Ok(EdgeWeights::from_fn(g, |i, j| {
        let (a, b) = (latent.row(i), latent.row(j));
        if a.len() == 1 {
            return (a[0] - b[0]).abs();
        }
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match norm {
            WeightNorm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            WeightNorm::L1 => diffs.sum(),
            WeightNorm::Max => diffs.fold(0.0, f64::max),
        }
    }))
}

/// Path length used by [`qtree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLength {
    Hops,
    WeightSum,
}

/// Node score used by [`qpeel`]; the highest-scoring candidate goes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelScore {
    Random,
    WeightSum,
    WeightMax,
}

/// The five search variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    TreeHops,
    TreeWeight,
    PeelRandom,
    PeelSum,
    PeelMax,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::TreeHops,
        Variant::TreeWeight,
        Variant::PeelRandom,
        Variant::PeelSum,
        Variant::PeelMax,
    ];

    pub fn algorithm(self) -> &'static str {
        match self {
            Variant::TreeHops | Variant::TreeWeight => "qtree",
            _ => "qpeel",
        }
    }

    /// Single-letter variant code.
    pub fn code(self) -> &'static str {
        match self {
            Variant::TreeHops => "e",
            Variant::TreeWeight | Variant::PeelSum => "s",
            Variant::PeelRandom => "r",
            Variant::PeelMax => "m",
        }
    }

    /// Whether the variant reads proxy weights at all.
    pub fn is_profile_aware(self) -> bool {
        !matches!(self, Variant::TreeHops | Variant::PeelRandom)
    }

    /// Node set found by this variant. `rng_seed` only matters for the
    /// random peeling order.
    pub fn search(
        self,
        g: &Graph,
        weights: &EdgeWeights,
        seeds: &NodeSet,
        rng_seed: u64,
    ) -> Result<NodeSet> {
        match self {
            Variant::TreeHops => qtree(g, weights, seeds, PathLength::Hops),
            Variant::TreeWeight => qtree(g, weights, seeds, PathLength::WeightSum),
            Variant::PeelRandom => qpeel(g, weights, seeds, PeelScore::Random, rng_seed),
            Variant::PeelSum => qpeel(g, weights, seeds, PeelScore::WeightSum, rng_seed),
            Variant::PeelMax => qpeel(g, weights, seeds, PeelScore::WeightMax, rng_seed),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.algorithm() {
            "qtree" => "QTree",
            _ => "QPeel",
        };
        write!(f, "{name}({})", self.code())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "qtreee" => Ok(Variant::TreeHops),
            "qtrees" => Ok(Variant::TreeWeight),
            "qpeelr" => Ok(Variant::PeelRandom),
            "qpeels" => Ok(Variant::PeelSum),
            "qpeelm" => Ok(Variant::PeelMax),
            _ => Err(Error::InvalidInput(format!("unknown variant '{s}'"))),
        }
    }
}

fn check_seeds(g: &Graph, weights: &EdgeWeights, seeds: &NodeSet) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    seeds.check_within(g)?;
    weights.check_aligned(g)
}

/// Tree joining the seeds: the union of expanded metric-closure MST paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Connector {
    pub nodes: NodeSet,
    /// Distinct path edges as `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

/// Metric closure over the seeds, its minimum spanning tree, and the
/// expansion of every tree edge into its shortest path.
pub fn qtree_connector(
    g: &Graph,
    weights: &EdgeWeights,
    seeds: &NodeSet,
    length: PathLength,
) -> Result<Connector> {
    check_seeds(g, weights, seeds)?;
    let lengths = match length {
        PathLength::Hops => Lengths::Unit,
        PathLength::WeightSum => Lengths::Weighted(weights),
    };
    let q = seeds.as_slice();
    // Pair (i, j) with i < j is measured and expanded from the tree rooted
    // at q[j], which only has to reach the seeds before it.
    let trees: Vec<Option<ShortestPathTree>> = q
        .iter()
        .enumerate()
        .map(|(j, &s)| (j > 0).then(|| ShortestPathTree::build(g, lengths, s, Some(&q[..j]))))
        .collect();
    let closure: Vec<Vec<f64>> = (0..q.len())
        .map(|i| {
            (0..q.len())
                .map(|j| match &trees[j] {
                    Some(t) if i < j => t.distance(q[i]).unwrap_or(f64::INFINITY),
                    _ => f64::INFINITY,
                })
                .collect()
        })
        .collect();
    let tree = minimum_spanning_tree(&closure)?;

    let mut nodes = q.to_vec();
    let mut edges = Vec::new();
    for (i, j) in tree {
        let path = trees[j]
            .as_ref()
            .and_then(|t| t.path_from(g, lengths, q[i]))
            .ok_or(Error::SeedsDisconnected)?;
        nodes.extend_from_slice(path.nodes());
        edges.extend(path.edges().map(|(a, b)| (a.min(b), a.max(b))));
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(Connector {
        nodes: NodeSet::new(nodes),
        edges,
    })
}

pub fn qtree(
    g: &Graph,
    weights: &EdgeWeights,
    seeds: &NodeSet,
    length: PathLength,
) -> Result<NodeSet> {
    qtree_connector(g, weights, seeds, length).map(|c| c.nodes)
}

/// Counters from one peeling run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PeelStats {
    /// Main-loop iterations; never more than the node count.
    pub picks: usize,
    /// Candidates that had to stay to keep the seeds connected.
    pub kept: usize,
    /// Candidates dropped because they became isolated.
    pub pruned: usize,
    /// Times the seed-connecting tree had to be searched for again.
    pub tree_rebuilds: usize,
}

/// Tree joining all seeds inside the surviving node set.
///
/// Only removals of tree nodes can disconnect the seeds, so connectivity is
/// re-checked (and the tree rebuilt) just for those.
struct SeedTree {
    member: Vec<bool>,
    nodes: Vec<usize>,
    parent: Vec<usize>,
    stamp: Vec<u32>,
    round: u32,
    is_seed: Vec<bool>,
    seeds: Vec<usize>,
}

impl SeedTree {
    fn new(n: usize, seeds: &[usize]) -> Self {
        let mut is_seed = vec![false; n];
        for &s in seeds {
            is_seed[s] = true;
        }
        SeedTree {
            member: vec![false; n],
            nodes: Vec::new(),
            parent: vec![usize::MAX; n],
            stamp: vec![0; n],
            round: 0,
            is_seed,
            seeds: seeds.to_vec(),
        }
    }

    /// BFS from the first seed over `alive`; on success replaces the current
    /// tree with the union of BFS paths back from every seed.
    fn rebuild(&mut self, g: &Graph, alive: &[bool]) -> bool {
        self.round += 1;
        let root = self.seeds[0];
        self.stamp[root] = self.round;
        let mut remaining = self.seeds.len() - 1;
        let mut queue = VecDeque::from([root]);
        'search: while remaining > 0 {
            let Some(v) = queue.pop_front() else {
                return false;
            };
            for &u in g.neighbors(v) {
                if alive[u] && self.stamp[u] != self.round {
                    self.stamp[u] = self.round;
                    self.parent[u] = v;
                    if self.is_seed[u] {
                        remaining -= 1;
                        if remaining == 0 {
                            break 'search;
                        }
                    }
                    queue.push_back(u);
                }
            }
        }
        for &v in &self.nodes {
            self.member[v] = false;
        }
        self.nodes.clear();
        self.member[root] = true;
        self.nodes.push(root);
        for &s in &self.seeds[1..] {
            let mut v = s;
            while !self.member[v] {
                self.member[v] = true;
                self.nodes.push(v);
                v = self.parent[v];
            }
        }
        true
    }
}

/// Candidate order for peeling.
enum PeelQueue {
    /// Fixed order drawn once.
    Static { order: Vec<usize>, next: usize },
    /// Scores against the surviving node set, highest first, lowest id on ties.
    Dynamic {
        heap: BTreeSet<(OrderedFloat<f64>, Reverse<usize>)>,
        score: Vec<f64>,
        max_state: Option<MaxState>,
    },
}

/// Incident weights sorted heaviest first, with a cursor to the first
/// still-alive neighbour.
struct MaxState {
    sorted: Vec<Vec<(f64, usize)>>,
    cursor: Vec<usize>,
}

impl PeelQueue {
    fn new(
        g: &Graph,
        weights: &EdgeWeights,
        score: PeelScore,
        candidates: &[bool],
        rng_seed: u64,
    ) -> Self {
        let n = g.node_count();
        match score {
            PeelScore::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
                let draws: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                let mut order: Vec<usize> = (0..n).filter(|&v| candidates[v]).collect();
                order.sort_by(|&a, &b| draws[b].total_cmp(&draws[a]).then(a.cmp(&b)));
                PeelQueue::Static { order, next: 0 }
            }
            PeelScore::WeightSum => {
                let score: Vec<f64> = (0..n).map(|v| weights.incident(v).iter().sum()).collect();
                PeelQueue::dynamic(score, candidates, None)
            }
            PeelScore::WeightMax => {
                let sorted: Vec<Vec<(f64, usize)>> = (0..n)
                    .map(|v| {
                        let mut list: Vec<(f64, usize)> = weights
                            .incident(v)
                            .iter()
                            .copied()
                            .zip(g.neighbors(v).iter().copied())
                            .collect();
                        list.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                        list
                    })
                    .collect();
                let score = sorted
                    .iter()
                    .map(|l| l.first().map_or(0.0, |e| e.0))
                    .collect();
                let state = MaxState {
                    sorted,
                    cursor: vec![0; n],
                };
                PeelQueue::dynamic(score, candidates, Some(state))
            }
        }
    }

    fn dynamic(score: Vec<f64>, candidates: &[bool], max_state: Option<MaxState>) -> Self {
        let heap = (0..score.len())
            .filter(|&v| candidates[v])
            .map(|v| (OrderedFloat(score[v]), Reverse(v)))
            .collect();
        PeelQueue::Dynamic {
            heap,
            score,
            max_state,
        }
    }

    fn pop(&mut self, candidates: &[bool]) -> Option<usize> {
        match self {
            PeelQueue::Static { order, next } => {
                while *next < order.len() {
                    let v = order[*next];
                    *next += 1;
                    if candidates[v] {
                        return Some(v);
                    }
                }
                None
            }
            PeelQueue::Dynamic { heap, .. } => {
                while let Some((_, Reverse(v))) = heap.pop_last() {
                    if candidates[v] {
                        return Some(v);
                    }
                }
                None
            }
        }
    }

    /// `node` (a remaining candidate) just lost its neighbour across an edge
    /// of weight `w`.
    fn neighbour_removed(&mut self, node: usize, w: f64, alive: &[bool]) {
        let PeelQueue::Dynamic {
            heap,
            score,
            max_state,
        } = self
        else {
            return;
        };
        let updated = match max_state {
            None => score[node] - w,
            Some(state) => {
                let list = &state.sorted[node];
                let cursor = &mut state.cursor[node];
                while *cursor < list.len() && !alive[list[*cursor].1] {
                    *cursor += 1;
                }
                list.get(*cursor).map_or(0.0, |e| e.0)
            }
        };
        if updated != score[node] {
            heap.remove(&(OrderedFloat(score[node]), Reverse(node)));
            score[node] = updated;
            heap.insert((OrderedFloat(updated), Reverse(node)));
        }
    }
}

/// Top-down peeling. Seeds are never candidates for removal.
pub fn qpeel(
    g: &Graph,
    weights: &EdgeWeights,
    seeds: &NodeSet,
    score: PeelScore,
    rng_seed: u64,
) -> Result<NodeSet> {
    qpeel_with_stats(g, weights, seeds, score, rng_seed).map(|(nodes, _)| nodes)
}

pub fn qpeel_with_stats(
    g: &Graph,
    weights: &EdgeWeights,
    seeds: &NodeSet,
    score: PeelScore,
    rng_seed: u64,
) -> Result<(NodeSet, PeelStats)> {
    check_seeds(g, weights, seeds)?;
    let n = g.node_count();
    let mut alive = vec![true; n];
    let mut kept = seeds.mask(n);
    let mut candidate: Vec<bool> = kept.iter().map(|&s| !s).collect();
    let mut alive_degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut stats = PeelStats::default();

    let mut tree = SeedTree::new(n, seeds.as_slice());
    if !tree.rebuild(g, &alive) {
        return Err(Error::SeedsDisconnected);
    }
    let mut queue = PeelQueue::new(g, weights, score, &candidate, rng_seed);

    while let Some(v) = queue.pop(&candidate) {
        stats.picks += 1;
        candidate[v] = false;
        alive[v] = false;
        let seeds_connected = if tree.member[v] {
            stats.tree_rebuilds += 1;
            tree.rebuild(g, &alive)
        } else {
            true
        };
        if !seeds_connected {
            alive[v] = true;
            kept[v] = true;
            stats.kept += 1;
            continue;
        }
        for (k, &u) in g.neighbors(v).iter().enumerate() {
            if !alive[u] {
                continue;
            }
            alive_degree[u] -= 1;
            if !candidate[u] {
                continue;
            }
            if alive_degree[u] == 0 {
                candidate[u] = false;
                alive[u] = false;
                stats.pruned += 1;
            } else {
                queue.neighbour_removed(u, weights.incident(v)[k], &alive);
            }
        }
    }

    let nodes = (0..n).filter(|&v| kept[v]).collect();
    Ok((NodeSet::from_sorted_unchecked(nodes), stats))
}

/// A community with its exact equilibrium tension.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub nodes: NodeSet,
    pub edges_induced: usize,
    pub tension: f64,
    pub variant: Option<Variant>,
}

/// Conforms the subgraph induced by `nodes` and measures its tension.
pub fn evaluate_solution(
    g: &Graph,
    latent: &ProfileMatrix,
    nodes: &NodeSet,
    opts: &ConformOptions,
) -> Result<Solution> {
    latent.check_rows(g.node_count())?;
    let sub = induced_subgraph(g, nodes)?;
    if !sub.graph.is_connected() {
        return Err(Error::DisconnectedNodeSet);
    }
    let local_latent = latent.select_rows(&sub.original);
    let conformed = conform(&sub.graph, &local_latent, opts)?.conformed;
    let tension = social_tension(&sub.graph, &local_latent, &conformed)?;
    Ok(Solution {
        nodes: nodes.clone(),
        edges_induced: sub.graph.edge_count(),
        tension,
        variant: None,
    })
}

/// Proxy weights, search, and evaluation in one call.
pub fn find_community(
    g: &Graph,
    latent: &ProfileMatrix,
    seeds: &NodeSet,
    variant: Variant,
    norm: WeightNorm,
    rng_seed: u64,
    opts: &ConformOptions,
) -> Result<Solution> {
    let weights = proxy_weights(g, latent, norm)?;
    let nodes = variant.search(g, &weights, seeds, rng_seed)?;
    let mut solution = evaluate_solution(g, latent, &nodes, opts)?;
    solution.variant = Some(variant);
    Ok(solution)
}
