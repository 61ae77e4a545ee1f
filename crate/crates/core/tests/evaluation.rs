mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use tension_core::evaluation::{
    exponential_draws, generate_profiles, metrics, sample_seed_groups, top_singular_vectors,
    Incidence, ProfileScheme,
};
use tension_core::{find_community, proxy_weights, ConformOptions, Variant, WeightNorm};

use common::*;

fn two_blocks() -> Incidence {
    Incidence::from_records(
        4,
        [(0, "A", 1.0), (1, "A", 1.0), (2, "B", 1.0), (3, "B", 1.0)],
    )
    .unwrap()
}

#[test]
fn block_incidence_gives_block_constant_columns() {
    let inc = two_blocks();
    let p = generate_profiles(4, 2, &ProfileScheme::Eigenvector(&inc), 11).unwrap();
    for a in 0..2 {
        assert!((p.get(0, a) - p.get(1, a)).abs() < 1e-9);
        assert!((p.get(2, a) - p.get(3, a)).abs() < 1e-9);
    }
    assert!(p.values().iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn singular_values_match_dense_svd() {
    let mut rng = rng(21);
    let planted = tension_core::synthetic::planted_partition(60, 3, 0.3, 0.01, &mut rng).unwrap();
    let inc = tension_core::synthetic::planted_incidence(&planted.community, 5, 8, 0.8, &mut rng)
        .unwrap();
    let svd = top_singular_vectors(&inc, 3, 5).unwrap();
    let dense: DMatrix<f64> = inc.to_dense();
    let mut oracle: Vec<f64> = dense
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    oracle.sort_by(|a, b| b.total_cmp(a));
    for k in 0..3 {
        assert!((svd.values[k] - oracle[k]).abs() < 1e-8 * oracle[0], "σ{k}");
        let v = nalgebra::DVector::from_vec(svd.right[k].clone());
        let gram = dense.transpose() * &dense;
        let residual = (&gram * &v - &v * svd.values[k].powi(2)).norm() / svd.values[k].powi(2);
        assert!(residual < 1e-6);
    }
}

#[test]
fn exponential_mean_within_three_standard_errors() {
    let lambda = 6.0;
    let count = 200_000;
    let draws = exponential_draws(count, lambda, &mut rng(17)).unwrap();
    let mean = draws.iter().sum::<f64>() / count as f64;
    // Exp(λ) has standard deviation 1/λ.
    let se = (1.0 / lambda) / (count as f64).sqrt();
    assert!((mean - 1.0 / lambda).abs() < 3.0 * se, "mean {mean}");
}

#[test]
fn sampler_is_reproducible() {
    let mut a = rng(4);
    let g = connected_graph(&mut a, 80, 0.04);
    let first = sample_seed_groups(&g, 4, 300, 20, &mut rng(9)).unwrap();
    let second = sample_seed_groups(&g, 4, 300, 20, &mut rng(9)).unwrap();
    assert_eq!(first, second);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mpc_invariant_under_affine_profile_maps(
        seed in any::<u64>(),
        n in 4usize..40,
        scale in prop_oneof![0.05f64..0.9, -0.9f64..-0.05],
        shift in 0.0f64..0.1,
    ) {
        let mut rng = rng(seed);
        let g = connected_graph(&mut rng, n, 0.1);
        let x = uniform_profiles(&mut rng, n, 1);
        let y = x.map(|v| scale * v + shift);
        let q = random_seeds(&mut rng, n, 3);
        let opts = ConformOptions::default();
        let sol = find_community(&g, &x, &q, Variant::TreeHops, WeightNorm::L2, 0, &opts).unwrap();
        let mapped = find_community(&g, &y, &q, Variant::TreeHops, WeightNorm::L2, 0, &opts).unwrap();
        let mx = metrics(&g, &proxy_weights(&g, &x, WeightNorm::L2).unwrap(), &sol, &q).unwrap();
        let my = metrics(&g, &proxy_weights(&g, &y, WeightNorm::L2).unwrap(), &mapped, &q).unwrap();
        prop_assert!((mx.mpc - my.mpc).abs() <= 1e-9 * mx.mpc.max(1.0));
        prop_assert!((mx.tau - my.tau).abs() <= 1e-7 * mx.tau.max(1.0));
        prop_assert_eq!(mx.mpe, my.mpe);
    }

    #[test]
    fn generated_profiles_are_in_unit_interval(seed in any::<u64>(), n in 1usize..200, m in 1usize..5, alpha in 0.0f64..=1.0) {
        for scheme in [
            ProfileScheme::Uniform,
            ProfileScheme::Exponential { lambda: 6.0 },
            ProfileScheme::Thresholded { alpha },
        ] {
            let p = generate_profiles(n, m, &scheme, seed).unwrap();
            prop_assert!(p.values().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
