//! Synthetic and structure-derived latent profiles.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::profiles::ProfileMatrix;

/// Sparse node × feature count matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Incidence {
    rows: usize,
    features: Vec<String>,
    /// `(node, feature, value)`; repeated pairs add up.
    entries: Vec<(usize, usize, f64)>,
}

impl Incidence {
    pub fn new(
        rows: usize,
        features: Vec<String>,
        entries: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        for &(node, feature, value) in &entries {
            if node >= rows {
                return Err(Error::InvalidNode {
                    node,
                    node_count: rows,
                });
            }
            if feature >= features.len() {
                return Err(Error::InvalidInput(format!(
                    "feature index {feature} out of range"
                )));
            }
            if !value.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite count for node {node}"
                )));
            }
        }
        Ok(Incidence {
            rows,
            features,
            entries,
        })
    }

    /// From `(node, label, count)` records; features are indexed in order of
    /// first appearance.
    pub fn from_records<'a, I>(rows: usize, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, &'a str, f64)>,
    {
        let mut features: Vec<String> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut entries = Vec::new();
        for (node, label, count) in records {
            let f = *index.entry(label.to_string()).or_insert_with(|| {
                features.push(label.to_string());
                features.len() - 1
            });
            entries.push((node, f, count));
        }
        Incidence::new(rows, features, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// `M v` for a feature-side vector `v`.
    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for &(i, f, x) in &self.entries {
            out[i] += x * v[f];
        }
        out
    }

    /// `Mᵀ u` for a node-side vector `u`.
    fn apply_transpose(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.features.len()];
        for &(i, f, x) in &self.entries {
            out[f] += x * u[i];
        }
        out
    }

    /// `MᵀM v`
    pub fn gram_apply(&self, v: &[f64]) -> Vec<f64> {
        self.apply_transpose(&self.apply(v))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.features.len());
        for &(i, f, x) in &self.entries {
            m[(i, f)] += x;
        }
        m
    }
}

/// Leading singular triplets of an incidence matrix.
#[derive(Debug, Clone)]
pub struct SingularVectors {
    pub values: Vec<f64>,
    /// Unit feature-side vectors `v_k`.
    pub right: Vec<Vec<f64>>,
    /// Unit node-side vectors `u_k = M v_k / σ_k` (zero when `σ_k = 0`).
    pub left: Vec<Vec<f64>>,
    pub iterations: usize,
}

const SPECTRAL_TOL: f64 = 1e-9;
const SPECTRAL_MAX_ITER: usize = 20_000;

/// Top-`k` singular triplets by subspace iteration on `MᵀM` with a
/// Rayleigh–Ritz step per sweep.
pub fn top_singular_vectors(inc: &Incidence, k: usize, rng_seed: u64) -> Result<SingularVectors> {
    let available = inc.rows.min(inc.feature_count());
    if k > available {
        return Err(Error::TooFewEigenvectors {
            requested: k,
            available,
        });
    }
    let dim = inc.feature_count();
    let block = (k + 4).min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut basis = DMatrix::from_fn(dim, block, |_, _| rng.random::<f64>() - 0.5);
    basis = basis.qr().q();

    let gram_block = |basis: &DMatrix<f64>| {
        let mut out = DMatrix::zeros(dim, basis.ncols());
        for c in 0..basis.ncols() {
            let col: Vec<f64> = basis.column(c).iter().copied().collect();
            out.set_column(c, &nalgebra::DVector::from_vec(inc.gram_apply(&col)));
        }
        out
    };

    let mut iterations = 0;
    loop {
        iterations += 1;
        let image = gram_block(&basis);
        let projected = basis.transpose() * &image;
        let projected = (&projected + projected.transpose()) * 0.5;
        let eig = SymmetricEigen::new(projected);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let rotation = DMatrix::from_fn(block, block, |r, c| eig.eigenvectors[(r, order[c])]);
        let ritz = &basis * &rotation;
        let ritz_image = &image * &rotation;
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
        let scale = values[0].max(f64::MIN_POSITIVE);

        let converged = (0..k).all(|c| {
            let residual = (ritz_image.column(c) - ritz.column(c) * values[c]).norm();
            residual <= SPECTRAL_TOL * values[c].max(SPECTRAL_TOL * scale)
        });
        if converged || iterations >= SPECTRAL_MAX_ITER {
            let right: Vec<Vec<f64>> = (0..k)
                .map(|c| ritz.column(c).iter().copied().collect())
                .collect();
            let sigmas: Vec<f64> = values[..k].iter().map(|l| l.sqrt()).collect();
            let left = right
                .iter()
                .zip(&sigmas)
                .map(|(v, &s)| {
                    let u = inc.apply(v);
                    if s > 0.0 {
                        u.into_iter().map(|x| x / s).collect()
                    } else {
                        vec![0.0; inc.rows]
                    }
                })
                .collect();
            return Ok(SingularVectors {
                values: sigmas,
                right,
                left,
                iterations,
            });
        }
        basis = ritz_image.qr().q();
    }
}

/// Flips `v` so its largest-magnitude entry (lowest index on ties) is
/// positive, then maps it affinely onto `[0, 1]`. Constant vectors map to 0.
pub fn rescale_unit(v: &[f64]) -> Vec<f64> {
    let pivot = v
        .iter()
        .enumerate()
        .fold((0usize, 0.0f64), |best, (i, &x)| {
            if x.abs() > best.1.abs() {
                (i, x)
            } else {
                best
            }
        });
    let sign = if pivot.1 < 0.0 { -1.0 } else { 1.0 };
    let lo = v.iter().map(|&x| sign * x).fold(f64::INFINITY, f64::min);
    let hi = v
        .iter()
        .map(|&x| sign * x)
        .fold(f64::NEG_INFINITY, f64::max);
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return vec![0.0; v.len()];
    }
    v.iter()
        .map(|&x| ((sign * x - lo) / (hi - lo)).clamp(0.0, 1.0))
        .collect()
}

/// How latent profiles are produced.
#[derive(Debug, Clone)]
pub enum ProfileScheme<'a> {
    Uniform,
    /// Exp(λ) draws, values above 1 clamped to 1.
    Exponential {
        lambda: f64,
    },
    /// A seeded fraction `alpha` of nodes gets all-zero rows, the rest U[0,1].
    Thresholded {
        alpha: f64,
    },
    /// Leading left singular vectors of a node × feature incidence matrix.
    Eigenvector(&'a Incidence),
}

pub fn generate_profiles(
    n: usize,
    m: usize,
    scheme: &ProfileScheme<'_>,
    rng_seed: u64,
) -> Result<ProfileMatrix> {
    if m == 0 {
        return Err(Error::InvalidInput(
            "profiles need at least one attribute".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    match scheme {
        ProfileScheme::Uniform => {
            let values = (0..n * m).map(|_| rng.random::<f64>()).collect();
            ProfileMatrix::new(n, m, values)
        }
        ProfileScheme::Exponential { lambda } => {
            let values = exponential_draws(n * m, *lambda, &mut rng)?
                .into_iter()
                .map(|x| x.min(1.0))
                .collect();
            ProfileMatrix::new(n, m, values)
        }
        ProfileScheme::Thresholded { alpha } => {
            if !(0.0..=1.0).contains(alpha) {
                return Err(Error::InvalidInput(format!(
                    "threshold fraction {alpha} outside [0, 1]"
                )));
            }
            let zeroed = (alpha * n as f64).round() as usize;
            let mut is_zero = vec![false; n];
            for v in index::sample(&mut rng, n, zeroed) {
                is_zero[v] = true;
            }
            let mut values = Vec::with_capacity(n * m);
            for &z in &is_zero {
                for _ in 0..m {
                    let u = rng.random::<f64>();
                    values.push(if z { 0.0 } else { u });
                }
            }
            ProfileMatrix::new(n, m, values)
        }
        ProfileScheme::Eigenvector(inc) => {
            if inc.rows() != n {
                return Err(Error::DimensionMismatch(format!(
                    "incidence matrix has {} rows, expected {n}",
                    inc.rows()
                )));
            }
            let svd = top_singular_vectors(inc, m, rng_seed)?;
            let columns: Vec<Vec<f64>> = svd.left.iter().map(|u| rescale_unit(u)).collect();
            ProfileMatrix::from_columns(&columns)
        }
    }
}

/// Raw (unclamped) Exp(λ) draws.
pub fn exponential_draws<R: Rng>(count: usize, lambda: f64, rng: &mut R) -> Result<Vec<f64>> {
    let dist = Exp::new(lambda)
        .ok()
        .filter(|_| lambda > 0.0)
        .ok_or_else(|| {
            Error::InvalidInput(format!("exponential rate must be positive, got {lambda}"))
        })?;
    Ok((0..count).map(|_| dist.sample(rng)).collect())
}
