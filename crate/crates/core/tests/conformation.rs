mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use tension_core::{
    conform, equilibrium_solve, fixed_point_residual, node_tension, social_tension,
    social_tension_by_edges, ConformOptions, Graph, ProfileMatrix,
};

use common::*;

fn instance(seed: u64, n: usize, p: f64, m: usize) -> (Graph, ProfileMatrix) {
    let mut rng = rng(seed);
    let g = random_graph(&mut rng, n, p);
    let x = uniform_profiles(&mut rng, n, m);
    (g, x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iteration_matches_linear_solve(seed in any::<u64>(), n in 2usize..80, p in 0.02f64..0.5, m in 1usize..4) {
        let (g, x) = instance(seed, n, p, m);
        let iterated = conform(&g, &x, &ConformOptions::default()).unwrap().conformed;
        let exact = equilibrium_solve(&g, &x).unwrap();
        prop_assert!(iterated.max_abs_diff(&exact) < 1e-7);
        prop_assert!(fixed_point_residual(&g, &x, &exact).unwrap() < 1e-10);
    }

    #[test]
    fn conformed_values_stay_in_column_range(seed in any::<u64>(), n in 1usize..60, p in 0.0f64..0.6, m in 1usize..4) {
        let (g, x) = instance(seed, n, p, m);
        let f = conform(&g, &x, &ConformOptions::default()).unwrap().conformed;
        for a in 0..m {
            let col = x.column(a);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for v in f.column(a) {
                prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn equilibrium_is_a_nash_point(seed in any::<u64>(), n in 2usize..40, p in 0.05f64..0.5) {
        let (g, x) = instance(seed, n, p, 1);
        let f = equilibrium_solve(&g, &x).unwrap();
        let eps = 1e-5;
        for i in 0..n {
            let fi = f.get(i, 0);
            let analytic = 2.0 * (fi - x.get(i, 0))
                + 2.0 * g.neighbors(i).iter().map(|&j| fi - f.get(j, 0)).sum::<f64>();
            prop_assert!(analytic.abs() < 1e-6);
            let mut up = f.clone();
            up.set(i, 0, fi + eps);
            let mut down = f.clone();
            down.set(i, 0, fi - eps);
            let numeric = (node_tension(&g, &x, &up, i).unwrap() - node_tension(&g, &x, &down, i).unwrap()) / (2.0 * eps);
            prop_assert!((numeric - analytic).abs() < 1e-4);
        }
    }

    #[test]
    fn tension_is_additive_over_columns(seed in any::<u64>(), n in 1usize..50, p in 0.0f64..0.5, m in 2usize..6) {
        let (g, x) = instance(seed, n, p, m);
        let f = equilibrium_solve(&g, &x).unwrap();
        let total = social_tension(&g, &x, &f).unwrap();
        let parts: f64 = (0..m)
            .map(|a| {
                let xa = ProfileMatrix::from_column(x.column(a));
                let fa = ProfileMatrix::from_column(f.column(a));
                social_tension(&g, &xa, &fa).unwrap()
            })
            .sum();
        prop_assert!((total - parts).abs() <= 1e-12 * total.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn tension_formulas_agree(seed in any::<u64>(), n in 1usize..50, p in 0.0f64..0.5, m in 1usize..4) {
        let (g, x) = instance(seed, n, p, m);
        let f = conform(&g, &x, &ConformOptions::default()).unwrap().conformed;
        let by_node = social_tension(&g, &x, &f).unwrap();
        let by_edge = social_tension_by_edges(&g, &x, &f).unwrap();
        prop_assert!((by_node - by_edge).abs() <= 1e-12 * by_node.max(1e-300) + 1e-300);
    }

    #[test]
    fn conformation_is_deterministic_across_columns(seed in any::<u64>(), n in 2usize..40) {
        let (g, x) = instance(seed, n, 0.2, 5);
        let whole = conform(&g, &x, &ConformOptions::default()).unwrap().conformed;
        for a in 0..5 {
            let single = conform(&g, &ProfileMatrix::from_column(x.column(a)), &ConformOptions::default())
                .unwrap()
                .conformed;
            prop_assert_eq!(single.column(0), whole.column(a));
        }
    }
}

#[test]
fn single_edge_fixed_point_and_tension() {
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let x = ProfileMatrix::from_column(vec![0.0, 1.0]);
    let f = conform(&g, &x, &ConformOptions::default())
        .unwrap()
        .conformed;
    assert!((f.get(0, 0) - 1.0 / 3.0).abs() < 1e-9);
    assert!((f.get(1, 0) - 2.0 / 3.0).abs() < 1e-9);
    let t = social_tension(&g, &x, &f).unwrap();
    assert!((t - 4.0 / 9.0).abs() < 1e-9);
    assert_relative_eq!(
        t,
        social_tension_by_edges(&g, &x, &f).unwrap(),
        max_relative = 1e-12
    );
}

#[test]
fn edgeless_graph_is_already_conformed() {
    let g = Graph::empty(4);
    let x = ProfileMatrix::from_column(vec![0.1, 0.9, 0.4, 0.0]);
    let res = conform(&g, &x, &ConformOptions::default()).unwrap();
    assert_eq!(res.conformed, x);
    assert_eq!(social_tension(&g, &x, &res.conformed).unwrap(), 0.0);
}
