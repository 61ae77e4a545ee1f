//! Repeated-averaging conformation and social tension.
//!
//! Each node publicly adopts the average of its own latent value and its
//! neighbours' current conformed values. The process is run per attribute
//! column; its fixed point is the solution of `(I + D - A) f = x`.

use rayon::prelude::*;

use crate::error::{Error, Result, Unconverged};
use crate::graph::Graph;
use crate::profiles::ProfileMatrix;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformOptions {
    /// Stop once the max-norm change of one synchronous sweep drops below this.
    pub tol: f64,
    /// Sweep budget; `None` means `max(100 n, 10_000)`.
    pub max_iter: Option<usize>,
}

impl Default for ConformOptions {
    fn default() -> Self {
        ConformOptions {
            tol: DEFAULT_TOL,
            max_iter: None,
        }
    }
}

impl ConformOptions {
    pub fn budget(&self, n: usize) -> usize {
        self.max_iter.unwrap_or_else(|| (100 * n).max(10_000))
    }
}

#[derive(Debug, Clone)]
pub struct ConformationResult {
    pub conformed: ProfileMatrix,
    /// Sweeps of the slowest column.
    pub iterations: usize,
    /// Max-norm change of the last sweep, over all columns.
    pub residual: f64,
}

struct ColumnRun {
    values: Vec<f64>,
    iterations: usize,
    residual: f64,
    converged: bool,
}

fn conform_column(g: &Graph, latent: &[f64], tol: f64, budget: usize) -> ColumnRun {
    let mut current = latent.to_vec();
    let mut next = vec![0.0; latent.len()];
    let mut iterations = 0;
    loop {
        let mut change = 0.0f64;
        for (i, slot) in next.iter_mut().enumerate() {
            let nbrs = g.neighbors(i);
            let sum: f64 = nbrs.iter().map(|&j| current[j]).sum();
            let value = (latent[i] + sum) / (1 + nbrs.len()) as f64;
            change = change.max((value - current[i]).abs());
            *slot = value;
        }
        std::mem::swap(&mut current, &mut next);
        iterations += 1;
        if change < tol || iterations >= budget {
            return ColumnRun {
                values: current,
                iterations,
                residual: change,
                converged: change < tol,
            };
        }
    }
}

/// Runs synchronous repeated averaging from `f(0) = x` until one sweep moves
/// no value by more than `opts.tol`.
pub fn conform(
    g: &Graph,
    latent: &ProfileMatrix,
    opts: &ConformOptions,
) -> Result<ConformationResult> {
    latent.check_rows(g.node_count())?;
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let budget = opts.budget(g.node_count());
    let columns = latent.columns();
    let run = |col: &Vec<f64>| conform_column(g, col, opts.tol, budget);
    let runs: Vec<ColumnRun> = if columns.len() > 1 {
        columns.par_iter().map(run).collect()
    } else {
        columns.iter().map(run).collect()
    };

    let iterations = runs.iter().map(|r| r.iterations).max().unwrap_or(0);
    let residual = runs.iter().map(|r| r.residual).fold(0.0, f64::max);
    let converged = runs.iter().all(|r| r.converged);
    let values: Vec<Vec<f64>> = runs.into_iter().map(|r| r.values).collect();
    let conformed = ProfileMatrix::from_columns(&values)?;
    if !converged {
        return Err(Error::NotConverged(Box::new(Unconverged {
            last: conformed,
            iterations,
            residual,
        })));
    }
    Ok(ConformationResult {
        conformed,
        iterations,
        residual,
    })
}

/// `y = (I + D - A) x`
fn apply_system(g: &Graph, x: &[f64], y: &mut [f64]) {
    for (i, out) in y.iter_mut().enumerate() {
        let nbrs = g.neighbors(i);
        let sum: f64 = nbrs.iter().map(|&j| x[j]).sum();
        *out = (1 + nbrs.len()) as f64 * x[i] - sum;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Jacobi-preconditioned conjugate gradients for `(I + D - A) f = x`,
/// restarted from the true residual until it falls below `target`.
fn solve_column(g: &Graph, rhs: &[f64], target: f64) -> Vec<f64> {
    let n = rhs.len();
    let diag: Vec<f64> = (0..n).map(|i| (1 + g.degree(i)) as f64).collect();
    let mut f = vec![0.0; n];
    let mut work = vec![0.0; n];
    for _restart in 0..8 {
        apply_system(g, &f, &mut work);
        let mut r: Vec<f64> = rhs.iter().zip(&work).map(|(b, af)| b - af).collect();
        if max_abs(&r) <= target {
            break;
        }
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        for _ in 0..(4 * n + 50) {
            apply_system(g, &p, &mut work);
            let pap = dot(&p, &work);
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for i in 0..n {
                f[i] += alpha * p[i];
                r[i] -= alpha * work[i];
            }
            if max_abs(&r) <= target * 0.1 {
                break;
            }
            for i in 0..n {
                z[i] = r[i] / diag[i];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
    }
    f
}

/// Exact fixed point of repeated averaging via a linear solve per column.
///
/// Independent of [`conform`]; used to cross-check it.
pub fn equilibrium_solve(g: &Graph, latent: &ProfileMatrix) -> Result<ProfileMatrix> {
    latent.check_rows(g.node_count())?;
    let columns: Vec<Vec<f64>> = latent
        .columns()
        .par_iter()
        .map(|x| solve_column(g, x, 1e-13))
        .collect();
    ProfileMatrix::from_columns(&columns)
}

/// `max |f_i - (x_i + Σ_j f_j) / (1 + |N(i)|)|` over nodes and attributes.
pub fn fixed_point_residual(
    g: &Graph,
    latent: &ProfileMatrix,
    conformed: &ProfileMatrix,
) -> Result<f64> {
    check_dims(g, latent, conformed)?;
    let mut worst = 0.0f64;
    for i in 0..g.node_count() {
        let d = (1 + g.degree(i)) as f64;
        for a in 0..latent.cols() {
            let sum: f64 = g.neighbors(i).iter().map(|&j| conformed.get(j, a)).sum();
            worst = worst.max((conformed.get(i, a) - (latent.get(i, a) + sum) / d).abs());
        }
    }
    Ok(worst)
}

fn check_dims(g: &Graph, latent: &ProfileMatrix, conformed: &ProfileMatrix) -> Result<()> {
    latent.check_rows(g.node_count())?;
    conformed.check_rows(g.node_count())?;
    if latent.cols() != conformed.cols() {
        return Err(Error::DimensionMismatch(format!(
            "latent has {} attributes, conformed has {}",
            latent.cols(),
            conformed.cols()
        )));
    }
    Ok(())
}

/// Inner plus cross tension of one node, summed over attributes.
pub fn node_tension(
    g: &Graph,
    latent: &ProfileMatrix,
    conformed: &ProfileMatrix,
    node: usize,
) -> Result<f64> {
    check_dims(g, latent, conformed)?;
    g.check_node(node)?;
    Ok(node_tension_unchecked(g, latent, conformed, node))
}

fn node_tension_unchecked(
    g: &Graph,
    latent: &ProfileMatrix,
    conformed: &ProfileMatrix,
    i: usize,
) -> f64 {
    let fi = conformed.row(i);
    let inner: f64 = latent
        .row(i)
        .iter()
        .zip(fi)
        .map(|(x, f)| (x - f).powi(2))
        .sum();
    let cross: f64 = g
        .neighbors(i)
        .iter()
        .map(|&j| {
            fi.iter()
                .zip(conformed.row(j))
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
        })
        .sum();
    inner + cross
}

/// Total social tension as the sum of per-node tensions.
pub fn social_tension(g: &Graph, latent: &ProfileMatrix, conformed: &ProfileMatrix) -> Result<f64> {
    check_dims(g, latent, conformed)?;
    Ok((0..g.node_count())
        .map(|i| node_tension_unchecked(g, latent, conformed, i))
        .sum())
}

/// Total social tension as inner tension plus twice the per-edge cross tension.
pub fn social_tension_by_edges(
    g: &Graph,
    latent: &ProfileMatrix,
    conformed: &ProfileMatrix,
) -> Result<f64> {
    check_dims(g, latent, conformed)?;
    let inner: f64 = latent
        .values()
        .iter()
        .zip(conformed.values())
        .map(|(x, f)| (x - f).powi(2))
        .sum();
    let cross: f64 = g
        .edges()
        .map(|(i, j)| {
            conformed
                .row(i)
                .iter()
                .zip(conformed.row(j))
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
        })
        .sum();
    Ok(inner + 2.0 * cross)
}
