//! Team formation on top of the community-search variants.
//!
//! A project names required skills. Skills become extra nodes attached to
//! their holders; a first search connects the required skill nodes, and a
//! second search reconnects the chosen people inside the original graph.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use ordered_float::OrderedFloat;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::community::{evaluate_solution, proxy_weights, Solution, Variant, WeightNorm};
use crate::conformation::ConformOptions;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::profiles::ProfileMatrix;
use crate::weights::EdgeWeights;

/// Default count a node needs in a skill's column to possess it.
pub const DEFAULT_SKILL_THRESHOLD: u64 = 4;

/// Above this node count, [`greedy_cardinality`] samples start nodes.
pub const ALL_STARTS_LIMIT: usize = 500;
pub const SAMPLED_STARTS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkillMap {
    universe: Vec<String>,
    per_node: Vec<BTreeSet<usize>>,
}

impl SkillMap {
    pub fn new(universe: Vec<String>, per_node: Vec<BTreeSet<usize>>) -> Result<Self> {
        if let Some(bad) = per_node.iter().flatten().find(|&&s| s >= universe.len()) {
            return Err(Error::InvalidInput(format!(
                "skill index {bad} outside universe of {}",
                universe.len()
            )));
        }
        Ok(SkillMap { universe, per_node })
    }

    /// Builds the map from `(node, label, count)` records: a node possesses a
    /// skill when its count reaches `threshold`. Labels are indexed in sorted
    /// order; labels nobody reaches the threshold for still join the universe.
    pub fn from_counts<'a, I>(node_count: usize, records: I, threshold: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, &'a str, u64)>,
    {
        let mut totals: BTreeMap<String, BTreeMap<usize, u64>> = BTreeMap::new();
        for (node, label, count) in records {
            if node >= node_count {
                return Err(Error::InvalidNode { node, node_count });
            }
            *totals
                .entry(label.to_string())
                .or_default()
                .entry(node)
                .or_default() += count;
        }
        let mut per_node = vec![BTreeSet::new(); node_count];
        let mut universe = Vec::with_capacity(totals.len());
        for (index, (label, counts)) in totals.into_iter().enumerate() {
            for (node, count) in counts {
                if count >= threshold {
                    per_node[node].insert(index);
                }
            }
            universe.push(label);
        }
        Ok(SkillMap { universe, per_node })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn node_count(&self) -> usize {
        self.per_node.len()
    }

    pub fn skills_of(&self, node: usize) -> &BTreeSet<usize> {
        &self.per_node[node]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.universe.iter().position(|l| l == label)
    }

    pub fn holders(&self, skill: usize) -> Vec<usize> {
        (0..self.per_node.len())
            .filter(|&v| self.per_node[v].contains(&skill))
            .collect()
    }

    /// Whether the union of skills over `nodes` includes every required skill.
    pub fn covers(&self, nodes: &NodeSet, project: &Project) -> bool {
        project
            .required()
            .iter()
            .all(|s| nodes.iter().any(|v| self.per_node[v].contains(s)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    required: BTreeSet<usize>,
}

impl Project {
    pub fn new(required: BTreeSet<usize>, skills: &SkillMap) -> Result<Self> {
        if required.is_empty() {
            return Err(Error::InvalidInput("project requires no skills".into()));
        }
        if let Some(&bad) = required.iter().find(|&&s| s >= skills.universe.len()) {
            return Err(Error::InvalidInput(format!(
                "skill index {bad} outside universe"
            )));
        }
        Ok(Project { required })
    }

    /// Resolves labels against the universe; unknown labels cannot be covered.
    pub fn from_labels<S: AsRef<str>>(labels: &[S], skills: &SkillMap) -> Result<Self> {
        let mut required = BTreeSet::new();
        for label in labels {
            let label = label.as_ref();
            let index = skills
                .index_of(label)
                .ok_or_else(|| Error::UncoverableSkill(label.to_string()))?;
            required.insert(index);
        }
        Project::new(required, skills)
    }

    pub fn required(&self) -> &BTreeSet<usize> {
        &self.required
    }
}

/// Original graph plus one node per skill in the universe.
#[derive(Debug, Clone)]
pub struct ExtendedGraph {
    pub graph: Graph,
    /// `skill_nodes[s]` is the node id of skill `s`; always `n + s`.
    pub skill_nodes: Vec<usize>,
    /// Skill nodes carry the mean latent profile of their holders.
    pub latent: ProfileMatrix,
    /// Proxy weights with every skill-incident edge set to zero.
    pub weights: EdgeWeights,
    original_nodes: usize,
}

impl ExtendedGraph {
    pub fn is_skill_node(&self, v: usize) -> bool {
        v >= self.original_nodes
    }

    pub fn original_node_count(&self) -> usize {
        self.original_nodes
    }
}

pub fn extended_graph(
    g: &Graph,
    skills: &SkillMap,
    project: &Project,
    latent: &ProfileMatrix,
    norm: WeightNorm,
) -> Result<ExtendedGraph> {
    let n = g.node_count();
    latent.check_rows(n)?;
    if skills.node_count() != n {
        return Err(Error::DimensionMismatch(format!(
            "skill map covers {} nodes, graph has {n}",
            skills.node_count()
        )));
    }
    let holders: Vec<Vec<usize>> = (0..skills.universe.len())
        .map(|s| skills.holders(s))
        .collect();
    if let Some(&s) = project.required().iter().find(|&&s| holders[s].is_empty()) {
        return Err(Error::UncoverableSkill(skills.universe[s].clone()));
    }

    let skill_nodes: Vec<usize> = (0..holders.len()).map(|s| n + s).collect();
    let edges = g.edges().chain(
        holders
            .iter()
            .enumerate()
            .flat_map(|(s, hs)| hs.iter().map(move |&v| (v, n + s))),
    );
    let graph = Graph::from_edges(n + holders.len(), edges)?;

    let m = latent.cols();
    let skill_rows: Vec<Vec<f64>> = holders
        .iter()
        .map(|hs| {
            let mut mean = vec![0.0; m];
            for &v in hs {
                for (a, slot) in mean.iter_mut().enumerate() {
                    *slot += latent.get(v, a);
                }
            }
            if !hs.is_empty() {
                mean.iter_mut().for_each(|x| *x /= hs.len() as f64);
            }
            mean
        })
        .collect();
    let mut extended_latent = latent.clone();
    extended_latent.append_rows(&skill_rows)?;

    let mut weights = proxy_weights(&graph, &extended_latent, norm)?;
    let mask: Vec<bool> = (0..graph.node_count()).map(|v| v >= n).collect();
    weights.override_incident(&graph, &mask, 0.0);

    Ok(ExtendedGraph {
        graph,
        skill_nodes,
        latent: extended_latent,
        weights,
        original_nodes: n,
    })
}

#[derive(Debug, Clone)]
pub struct TeamOutcome {
    pub solution: Solution,
    /// People selected by the search on the extended graph.
    pub first_pass: NodeSet,
    /// The second search returned exactly the first-pass people.
    pub second_pass_noop: bool,
}

/// Two-step team search: connect the required skill nodes in the extended
/// graph, then reconnect the chosen people in `g`.
#[allow(clippy::too_many_arguments)]
pub fn tteam(
    g: &Graph,
    latent: &ProfileMatrix,
    skills: &SkillMap,
    project: &Project,
    variant: Variant,
    norm: WeightNorm,
    rng_seed: u64,
    opts: &ConformOptions,
) -> Result<TeamOutcome> {
    let ext = extended_graph(g, skills, project, latent, norm)?;
    let skill_seeds: NodeSet = project
        .required()
        .iter()
        .map(|&s| ext.skill_nodes[s])
        .collect();
    let first = variant.search(&ext.graph, &ext.weights, &skill_seeds, rng_seed)?;
    let mut first_pass: NodeSet = first.iter().filter(|&v| !ext.is_skill_node(v)).collect();
    if first_pass.is_empty() {
        // A lone skill seed is its own connector. Every single holder has
        // zero tension, so take the lowest id.
        let skill = *project
            .required()
            .iter()
            .next()
            .ok_or(Error::EmptyNodeSet)?;
        let holder = *skills
            .holders(skill)
            .first()
            .ok_or_else(|| Error::UncoverableSkill(skills.universe()[skill].clone()))?;
        first_pass = NodeSet::new(vec![holder]);
    }

    let weights = proxy_weights(g, latent, norm)?;
    let second = variant.search(g, &weights, &first_pass, rng_seed)?;
    let second_pass_noop = second == first_pass;
    let mut solution = evaluate_solution(g, latent, &second, opts)?;
    solution.variant = Some(variant);
    Ok(TeamOutcome {
        solution,
        first_pass,
        second_pass_noop,
    })
}

/// Grows a connected set from `start` by repeatedly adding the frontier node
/// whose proxy cost `Σ w²` towards the current set is smallest (lowest id on
/// ties). Returns `None` if the component of `start` has fewer than `k` nodes.
fn grow_from(g: &Graph, weights: &EdgeWeights, start: usize, k: usize) -> Option<NodeSet> {
    let n = g.node_count();
    let mut inside = vec![false; n];
    let mut cost = vec![0.0f64; n];
    let mut heap = BinaryHeap::new();
    let mut chosen = Vec::with_capacity(k);
    let mut add =
        |v: usize, inside: &mut Vec<bool>, cost: &mut Vec<f64>, heap: &mut BinaryHeap<_>| {
            inside[v] = true;
            chosen.push(v);
            for (idx, &u) in g.neighbors(v).iter().enumerate() {
                if !inside[u] {
                    let w = weights.incident(v)[idx];
                    cost[u] += w * w;
                    heap.push(Reverse((OrderedFloat(cost[u]), u)));
                }
            }
        };
    add(start, &mut inside, &mut cost, &mut heap);
    let mut count = 1;
    while count < k {
        let next = loop {
            let Reverse((OrderedFloat(c), u)) = heap.pop()?;
            if !inside[u] && c == cost[u] {
                break u;
            }
        };
        add(next, &mut inside, &mut cost, &mut heap);
        count += 1;
    }
    Some(NodeSet::new(chosen))
}

/// Connected set of exactly `k` nodes with low tension, grown greedily from
/// every start node (or a seeded sample of starts on large graphs).
pub fn greedy_cardinality(
    g: &Graph,
    latent: &ProfileMatrix,
    k: usize,
    norm: WeightNorm,
    rng_seed: u64,
    opts: &ConformOptions,
) -> Result<Solution> {
    let n = g.node_count();
    latent.check_rows(n)?;
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "team size {k} outside 1..={n}"
        )));
    }
    let largest = g.largest_component().len();
    if k > largest {
        return Err(Error::ComponentTooSmall {
            needed: k,
            available: largest,
        });
    }
    let weights = proxy_weights(g, latent, norm)?;
    let starts: Vec<usize> = if n <= ALL_STARTS_LIMIT {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut picked = index::sample(&mut rng, n, SAMPLED_STARTS).into_vec();
        picked.sort_unstable();
        // Sampled starts may all sit in small components; the largest
        // component always holds a feasible start.
        let anchor = g.largest_component().as_slice()[0];
        if !picked.contains(&anchor) {
            picked.push(anchor);
        }
        picked
    };

    let mut grown: Vec<NodeSet> = starts
        .par_iter()
        .filter_map(|&s| grow_from(g, &weights, s, k))
        .collect();
    grown.sort();
    grown.dedup();
    let evaluated: Vec<Solution> = grown
        .par_iter()
        .map(|nodes| evaluate_solution(g, latent, nodes, opts))
        .collect::<Result<_>>()?;
    evaluated
        .into_iter()
        .min_by(|a, b| {
            a.tension
                .total_cmp(&b.tension)
                .then_with(|| a.nodes.cmp(&b.nodes))
        })
        .ok_or(Error::ComponentTooSmall {
            needed: k,
            available: largest,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn skills(n: usize, records: &[(usize, &str)]) -> SkillMap {
        SkillMap::from_counts(
            n,
            records.iter().map(|&(v, l)| (v, l, 10)),
            DEFAULT_SKILL_THRESHOLD,
        )
        .unwrap()
    }

    #[test]
    fn threshold_decides_possession() {
        let map = SkillMap::from_counts(
            2,
            [(0, "kdd", 4), (1, "kdd", 3), (1, "icdm", 1), (1, "icdm", 3)],
            4,
        )
        .unwrap();
        assert_eq!(map.universe(), &["icdm".to_string(), "kdd".to_string()]);
        assert_eq!(map.holders(1), vec![0]);
        assert_eq!(map.holders(0), vec![1]);
    }

    #[test]
    fn extended_graph_attaches_skill_nodes() {
        let g = path(4);
        let x = ProfileMatrix::from_column(vec![0.0, 0.2, 0.4, 0.8]);
        let map = skills(4, &[(3, "a"), (1, "b"), (2, "b")]);
        let project = Project::from_labels(&["a"], &map).unwrap();
        let ext = extended_graph(&g, &map, &project, &x, WeightNorm::L2).unwrap();
        let a = ext.skill_nodes[map.index_of("a").unwrap()];
        let b = ext.skill_nodes[map.index_of("b").unwrap()];
        assert_eq!(ext.graph.neighbors(a), &[3]);
        assert_eq!(ext.graph.degree(b), 2);
        assert!((ext.latent.get(b, 0) - 0.3).abs() < 1e-15);
        assert_eq!(ext.weights.get(&ext.graph, b, 1), Some(0.0));
        assert_eq!(ext.weights.get(&ext.graph, 0, 1), Some(0.2));
    }

    #[test]
    fn uncoverable_skill_errors() {
        let g = path(3);
        let x = ProfileMatrix::from_column(vec![0.0; 3]);
        let map = SkillMap::from_counts(3, [(0, "a", 10), (1, "b", 1)], 4).unwrap();
        let project = Project::from_labels(&["b"], &map).unwrap();
        assert!(matches!(
            extended_graph(&g, &map, &project, &x, WeightNorm::L2),
            Err(Error::UncoverableSkill(s)) if s == "b"
        ));
        assert!(matches!(
            Project::from_labels(&["zzz"], &map),
            Err(Error::UncoverableSkill(_))
        ));
    }

    #[test]
    fn tteam_single_holder() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let x = ProfileMatrix::from_column(vec![0.1, 0.5, 0.9, 0.3, 0.7]);
        let map = skills(5, &[(3, "a")]);
        let project = Project::from_labels(&["a"], &map).unwrap();
        for v in Variant::ALL {
            let out = tteam(
                &g,
                &x,
                &map,
                &project,
                v,
                WeightNorm::L2,
                1,
                &ConformOptions::default(),
            )
            .unwrap();
            assert_eq!(out.solution.nodes.as_slice(), &[3], "{v}");
            assert!(out.second_pass_noop);
        }
    }

    #[test]
    fn tteam_one_node_covers_both() {
        let g = path(4);
        let x = ProfileMatrix::from_column(vec![0.1, 0.5, 0.9, 0.3]);
        let map = skills(4, &[(2, "a"), (2, "b")]);
        let project = Project::from_labels(&["a", "b"], &map).unwrap();
        for v in Variant::ALL {
            let out = tteam(
                &g,
                &x,
                &map,
                &project,
                v,
                WeightNorm::L2,
                1,
                &ConformOptions::default(),
            )
            .unwrap();
            assert_eq!(out.solution.nodes.as_slice(), &[2], "{v}");
        }
    }

    #[test]
    fn tteam_path_fixture() {
        let g = path(3);
        let x = ProfileMatrix::from_column(vec![0.2, 0.6, 0.4]);
        let map = skills(3, &[(0, "a"), (2, "b")]);
        let project = Project::from_labels(&["a", "b"], &map).unwrap();
        for v in Variant::ALL {
            let out = tteam(
                &g,
                &x,
                &map,
                &project,
                v,
                WeightNorm::L2,
                1,
                &ConformOptions::default(),
            )
            .unwrap();
            assert_eq!(out.solution.nodes.as_slice(), &[0, 1, 2], "{v}");
            assert_eq!(out.first_pass.as_slice(), &[0, 1, 2]);
        }
    }

    #[test]
    fn greedy_cardinality_examples() {
        let opts = ConformOptions::default();
        let g = path(4);
        let x = ProfileMatrix::from_column(vec![0.0, 0.0, 1.0, 1.0]);
        let best = greedy_cardinality(&g, &x, 2, WeightNorm::L2, 0, &opts).unwrap();
        assert_eq!(best.nodes.as_slice(), &[0, 1]);
        assert_eq!(best.tension, 0.0);

        let one = greedy_cardinality(&g, &x, 1, WeightNorm::L2, 0, &opts).unwrap();
        assert_eq!(one.nodes.as_slice(), &[0]);
        assert_eq!(one.tension, 0.0);

        let all = greedy_cardinality(&g, &x, 4, WeightNorm::L2, 0, &opts).unwrap();
        assert_eq!(all.nodes.len(), 4);
    }

    #[test]
    fn greedy_cardinality_too_large() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let x = ProfileMatrix::from_column(vec![0.5; 5]);
        let err = greedy_cardinality(&g, &x, 4, WeightNorm::L2, 0, &ConformOptions::default());
        assert!(matches!(
            err,
            Err(Error::ComponentTooSmall {
                needed: 4,
                available: 3
            })
        ));
    }
}
