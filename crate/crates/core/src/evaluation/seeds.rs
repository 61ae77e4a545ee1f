//! Seed-set sampling grouped by spread.
//!
//! Candidate sets are drawn uniformly from the largest component and ranked
//! by their maximum pairwise hop distance. Ranks in the 10–33 %, 33–66 % and
//! 66–90 % bands form the tight (D1), medium (D2) and dispersed (D3) groups.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};

pub const DEFAULT_CANDIDATES: usize = 1000;
pub const DEFAULT_PER_GROUP: usize = 30;

const BANDS: [(f64, f64); 3] = [(0.10, 0.33), (0.33, 0.66), (0.66, 0.90)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    D1,
    D2,
    D3,
}

impl GroupLabel {
    pub const ALL: [GroupLabel; 3] = [GroupLabel::D1, GroupLabel::D2, GroupLabel::D3];
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupLabel::D1 => "D1",
            GroupLabel::D2 => "D2",
            GroupLabel::D3 => "D3",
        })
    }
}

impl FromStr for GroupLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D1" | "d1" => Ok(GroupLabel::D1),
            "D2" | "d2" => Ok(GroupLabel::D2),
            "D3" | "d3" => Ok(GroupLabel::D3),
            _ => Err(Error::InvalidInput(format!("unknown seed group '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedGroup {
    pub label: GroupLabel,
    pub sets: Vec<NodeSet>,
    /// Maximum pairwise hop distance of each set, aligned with `sets`.
    pub spreads: Vec<usize>,
}

/// Largest hop distance between two members of `set`; `None` if some pair
/// is disconnected.
pub fn max_pairwise_hops(g: &Graph, set: &NodeSet) -> Option<usize> {
    let members = set.as_slice();
    let mut worst = 0;
    for (k, &s) in members
        .iter()
        .enumerate()
        .take(members.len().saturating_sub(1))
    {
        let dist = g.bfs_hops(s);
        for &t in &members[k + 1..] {
            worst = worst.max(dist[t]?);
        }
    }
    Some(worst)
}

pub fn sample_seed_groups<R: Rng>(
    g: &Graph,
    set_size: usize,
    n_candidates: usize,
    per_group: usize,
    rng: &mut R,
) -> Result<[SeedGroup; 3]> {
    if set_size == 0 {
        return Err(Error::InvalidInput("seed sets must be nonempty".into()));
    }
    let component = g.largest_component();
    if set_size > component.len() {
        return Err(Error::ComponentTooSmall {
            needed: set_size,
            available: component.len(),
        });
    }
    let pool = component.as_slice();
    let candidates: Vec<NodeSet> = (0..n_candidates)
        .map(|_| {
            index::sample(rng, pool.len(), set_size)
                .into_iter()
                .map(|k| pool[k])
                .collect()
        })
        .collect();
    let spreads: Vec<usize> = candidates
        .iter()
        .map(|set| max_pairwise_hops(g, set).expect("sets drawn from one component"))
        .collect();

    let mut ranked: Vec<usize> = (0..n_candidates).collect();
    ranked.sort_by_key(|&c| (spreads[c], c));

    let groups = GroupLabel::ALL.map(|label| {
        let (lo, hi) = BANDS[label as usize];
        let band =
            &ranked[(lo * n_candidates as f64) as usize..(hi * n_candidates as f64) as usize];
        let mut chosen: Vec<usize> = if band.len() <= per_group {
            band.to_vec()
        } else {
            index::sample(rng, band.len(), per_group)
                .into_iter()
                .map(|k| band[k])
                .collect()
        };
        chosen.sort_unstable();
        SeedGroup {
            label,
            sets: chosen.iter().map(|&c| candidates[c].clone()).collect(),
            spreads: chosen.iter().map(|&c| spreads[c]).collect(),
        }
    });
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn clique(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn clique_spreads_are_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let groups = sample_seed_groups(&clique(12), 3, 200, 30, &mut rng).unwrap();
        for group in &groups {
            assert_eq!(group.sets.len(), 30);
            assert!(group.spreads.iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn singleton_sets_have_zero_spread() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let groups = sample_seed_groups(&g, 1, 50, 10, &mut rng).unwrap();
        assert!(groups.iter().all(|grp| grp.spreads.iter().all(|&d| d == 0)));
    }

    #[test]
    fn path_groups_are_ordered_by_spread() {
        let n = 200;
        let g = Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let [d1, _, d3] = sample_seed_groups(&g, 2, 1000, 30, &mut rng).unwrap();
        let mean =
            |grp: &SeedGroup| grp.spreads.iter().sum::<usize>() as f64 / grp.spreads.len() as f64;
        assert!(mean(&d3) > mean(&d1));
        assert!(d3.spreads.iter().min() >= d1.spreads.iter().max());
    }

    #[test]
    fn restricted_to_largest_component() {
        let g = Graph::from_edges(7, [(0, 1), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let groups = sample_seed_groups(&g, 2, 100, 5, &mut rng).unwrap();
        assert!(groups
            .iter()
            .flat_map(|grp| &grp.sets)
            .all(|s| s.iter().all(|v| v >= 2)));
        assert!(matches!(
            sample_seed_groups(&g, 6, 10, 5, &mut rng),
            Err(Error::ComponentTooSmall {
                needed: 6,
                available: 5
            })
        ));
    }

    #[test]
    fn reproducible_with_same_seed() {
        let g = clique(9);
        let a = sample_seed_groups(&g, 3, 100, 10, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let b = sample_seed_groups(&g, 3, 100, 10, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(a, b);
    }
}
