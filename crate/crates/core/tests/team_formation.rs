mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use tension_core::{
    greedy_cardinality, tteam, ConformOptions, Error, Graph, NodeSet, ProfileMatrix, Project,
    SkillMap, Variant, WeightNorm,
};

use common::*;

fn random_skills(rng: &mut rand_chacha::ChaCha8Rng, n: usize, universe: usize) -> SkillMap {
    let labels: Vec<String> = (0..universe).map(|s| format!("s{s}")).collect();
    let per_node = (0..n)
        .map(|_| (0..universe).filter(|_| rng.random_bool(0.15)).collect())
        .collect();
    SkillMap::new(labels, per_node).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn teams_cover_and_connect(seed in any::<u64>(), n in 3usize..50, need in 1usize..5) {
        let mut rng = rng(seed);
        let g = connected_graph(&mut rng, n, 0.1);
        let x = uniform_profiles(&mut rng, n, 2);
        let skills = random_skills(&mut rng, n, 8);
        let coverable: Vec<usize> = (0..8).filter(|&s| !skills.holders(s).is_empty()).collect();
        if coverable.is_empty() {
            return Ok(());
        }
        let required: BTreeSet<usize> = (0..need).map(|_| coverable[rng.random_range(0..coverable.len())]).collect();
        let project = Project::new(required, &skills).unwrap();
        for v in Variant::ALL {
            let out = tteam(&g, &x, &skills, &project, v, WeightNorm::L2, seed, &ConformOptions::default()).unwrap();
            prop_assert!(skills.covers(&out.solution.nodes, &project), "{} misses a skill", v);
            prop_assert!(induces_connected(&g, &out.solution.nodes), "{} disconnected", v);
            prop_assert!(out.solution.nodes.iter().all(|u| u < n));
        }
    }

    #[test]
    fn unique_holders_are_all_selected(seed in any::<u64>(), n in 3usize..40) {
        let mut rng = rng(seed);
        let g = connected_graph(&mut rng, n, 0.1);
        let x = uniform_profiles(&mut rng, n, 1);
        let holders = random_seeds(&mut rng, n, 3.min(n));
        let labels: Vec<String> = (0..holders.len()).map(|s| format!("s{s}")).collect();
        let mut per_node = vec![BTreeSet::new(); n];
        for (s, h) in holders.iter().enumerate() {
            per_node[h].insert(s);
        }
        let skills = SkillMap::new(labels.clone(), per_node).unwrap();
        let project = Project::from_labels(&labels, &skills).unwrap();
        for v in Variant::ALL {
            let out = tteam(&g, &x, &skills, &project, v, WeightNorm::L2, 1, &ConformOptions::default()).unwrap();
            prop_assert!(holders.is_subset(&out.first_pass), "{}", v);
            prop_assert!(holders.is_subset(&out.solution.nodes), "{}", v);
        }
    }

    #[test]
    fn greedy_returns_exactly_k_connected(seed in any::<u64>(), n in 1usize..60, k in 1usize..20) {
        let mut rng = rng(seed);
        let g = connected_graph(&mut rng, n, 0.05);
        let x = uniform_profiles(&mut rng, n, 1);
        let k = k.min(n);
        let sol = greedy_cardinality(&g, &x, k, WeightNorm::L2, seed, &ConformOptions::default()).unwrap();
        prop_assert_eq!(sol.nodes.len(), k);
        prop_assert!(induces_connected(&g, &sol.nodes));
    }
}

#[test]
fn path_fixture_picks_the_middle_node() {
    let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let x = ProfileMatrix::from_column(vec![0.2, 0.5, 0.9]);
    let skills = SkillMap::from_counts(3, [(0, "a", 5), (2, "b", 4), (1, "b", 3)], 4).unwrap();
    let project = Project::from_labels(&["a", "b"], &skills).unwrap();
    for v in Variant::ALL {
        let out = tteam(
            &g,
            &x,
            &skills,
            &project,
            v,
            WeightNorm::L2,
            0,
            &ConformOptions::default(),
        )
        .unwrap();
        assert_eq!(out.solution.nodes, NodeSet::new(vec![0, 1, 2]), "{v}");
    }
}

#[test]
fn greedy_rejects_oversized_teams() {
    let g = Graph::from_edges(5, [(0, 1), (2, 3), (3, 4)]).unwrap();
    let x = ProfileMatrix::from_column(vec![0.0; 5]);
    assert!(matches!(
        greedy_cardinality(&g, &x, 4, WeightNorm::L2, 0, &ConformOptions::default()),
        Err(Error::ComponentTooSmall {
            needed: 4,
            available: 3
        })
    ));
    let sol = greedy_cardinality(&g, &x, 3, WeightNorm::L2, 0, &ConformOptions::default()).unwrap();
    assert_eq!(sol.nodes, NodeSet::new(vec![2, 3, 4]));
}
