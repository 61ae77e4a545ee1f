use crate::community::{qtree_connector, PathLength, Solution};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::weights::EdgeWeights;

/// Mean of `w²` over the edges induced by `u`.
pub fn avg_sq_weight(g: &Graph, weights: &EdgeWeights, u: &NodeSet) -> Result<f64> {
    u.check_within(g)?;
    weights.check_aligned(g)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in u.iter() {
        for (k, &j) in g.neighbors(i).iter().enumerate() {
            if i < j && u.contains(j) {
                sum += weights.incident(i)[k].powi(2);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::NoEdges);
    }
    Ok(sum / count as f64)
}

/// Mean of `w²` over every edge of the graph.
pub fn graph_avg_sq_weight(g: &Graph, weights: &EdgeWeights) -> Result<f64> {
    weights.check_aligned(g)?;
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let sum: f64 = (0..g.node_count())
        .flat_map(|i| {
            g.neighbors(i)
                .iter()
                .zip(weights.incident(i))
                .filter(move |(&j, _)| i < j)
                .map(|(_, w)| w * w)
        })
        .sum();
    Ok(sum / g.edge_count() as f64)
}

/// Standardized quality measures of one solution; lower is better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Tension over `2 · tree_edges · avgC(V)`.
    pub tau: f64,
    /// Induced edges over `tree_edges`.
    pub mpe: f64,
    /// avgC of the solution over avgC of the whole graph.
    pub mpc: f64,
    pub raw_tension: f64,
    /// Edges of the hop-length seed connector (the normalizer).
    pub tree_edges: usize,
    /// Set when the solution has no edges and `mpc` was reported as 0.
    pub degenerate: bool,
}

/// Precomputed graph-wide average so many solutions can share it.
#[derive(Debug, Clone, Copy)]
pub struct MetricBase {
    pub graph_avg_sq_weight: f64,
}

impl MetricBase {
    pub fn new(g: &Graph, weights: &EdgeWeights) -> Result<Self> {
        let avg = graph_avg_sq_weight(g, weights)?;
        if avg <= 0.0 {
            return Err(Error::DegenerateProfiles);
        }
        Ok(MetricBase {
            graph_avg_sq_weight: avg,
        })
    }

    pub fn measure(
        &self,
        g: &Graph,
        weights: &EdgeWeights,
        solution: &Solution,
        seeds: &NodeSet,
    ) -> Result<Metrics> {
        let tree_edges = qtree_connector(g, weights, seeds, PathLength::Hops)?
            .edges
            .len();
        // A single seed has an empty connector; fall back to a unit normalizer.
        let norm = tree_edges.max(1) as f64;
        let (mpc, degenerate) = match avg_sq_weight(g, weights, &solution.nodes) {
            Ok(avg) => (avg / self.graph_avg_sq_weight, false),
            Err(Error::NoEdges) => (0.0, true),
            Err(e) => return Err(e),
        };
        Ok(Metrics {
            tau: solution.tension / (2.0 * norm * self.graph_avg_sq_weight),
            mpe: solution.edges_induced as f64 / norm,
            mpc,
            raw_tension: solution.tension,
            tree_edges,
            degenerate,
        })
    }
}

/// Metrics of `solution` for seed set `seeds`; `weights` are the proxy
/// weights of the working graph.
pub fn metrics(
    g: &Graph,
    weights: &EdgeWeights,
    solution: &Solution,
    seeds: &NodeSet,
) -> Result<Metrics> {
    MetricBase::new(g, weights)?.measure(g, weights, solution, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::{evaluate_solution, proxy_weights, WeightNorm};
    use crate::conformation::ConformOptions;
    use crate::profiles::ProfileMatrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn avg_sq_weight_cases() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let w = EdgeWeights::from_fn(&g, |i, _| if i == 0 { 0.1 } else { 0.3 });
        assert_abs_diff_eq!(
            avg_sq_weight(&g, &w, &(0..3).collect()).unwrap(),
            0.05,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            avg_sq_weight(&g, &w, &NodeSet::new(vec![1, 2])).unwrap(),
            0.09,
            epsilon = 1e-15
        );
        let half = EdgeWeights::uniform(&g, 0.5);
        assert_eq!(
            avg_sq_weight(&g, &half, &NodeSet::new(vec![0, 1])).unwrap(),
            0.25
        );
        let c = EdgeWeights::uniform(&g, 0.7);
        assert_abs_diff_eq!(
            avg_sq_weight(&g, &c, &(0..3).collect()).unwrap(),
            0.49,
            epsilon = 1e-15
        );
        assert!(matches!(
            avg_sq_weight(&g, &w, &NodeSet::new(vec![0, 2])),
            Err(Error::NoEdges)
        ));
    }

    #[test]
    fn exact_connector_gives_unit_mpe() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let x = ProfileMatrix::from_column(vec![0.0, 0.3, 0.5, 0.9]);
        let w = proxy_weights(&g, &x, WeightNorm::L2).unwrap();
        let q = NodeSet::new(vec![0, 2]);
        let sol = evaluate_solution(
            &g,
            &x,
            &NodeSet::new(vec![0, 1, 2]),
            &ConformOptions::default(),
        )
        .unwrap();
        let m = metrics(&g, &w, &sol, &q).unwrap();
        assert_eq!(m.tree_edges, 2);
        assert_eq!(m.mpe, 1.0);
        assert_abs_diff_eq!(
            m.tau,
            sol.tension / (4.0 * (0.09 + 0.04 + 0.16 + 0.81) / 4.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn whole_single_edge_graph_has_unit_mpc() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let x = ProfileMatrix::from_column(vec![0.2, 0.8]);
        let w = proxy_weights(&g, &x, WeightNorm::L2).unwrap();
        let q = NodeSet::new(vec![0, 1]);
        let sol = evaluate_solution(&g, &x, &q, &ConformOptions::default()).unwrap();
        let m = metrics(&g, &w, &sol, &q).unwrap();
        assert_abs_diff_eq!(m.mpc, 1.0, epsilon = 1e-15);
        assert_eq!(m.mpe, 1.0);
    }

    #[test]
    fn zero_weight_solution_has_zero_mpc_and_tension() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let x = ProfileMatrix::from_column(vec![0.4, 0.4, 0.9]);
        let w = proxy_weights(&g, &x, WeightNorm::L2).unwrap();
        let q = NodeSet::new(vec![0, 1]);
        let sol = evaluate_solution(&g, &x, &q, &ConformOptions::default()).unwrap();
        let m = metrics(&g, &w, &sol, &q).unwrap();
        assert_eq!(m.mpc, 0.0);
        assert_eq!(m.tau, 0.0);
        assert!(!m.degenerate);
    }

    #[test]
    fn single_node_solution_is_flagged() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let x = ProfileMatrix::from_column(vec![0.2, 0.8]);
        let w = proxy_weights(&g, &x, WeightNorm::L2).unwrap();
        let q = NodeSet::new(vec![0]);
        let sol = evaluate_solution(&g, &x, &q, &ConformOptions::default()).unwrap();
        let m = metrics(&g, &w, &sol, &q).unwrap();
        assert!(m.degenerate);
        assert_eq!((m.mpc, m.tau, m.tree_edges), (0.0, 0.0, 0));
    }

    #[test]
    fn identical_profiles_are_degenerate() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let w = EdgeWeights::uniform(&g, 0.0);
        assert!(matches!(
            MetricBase::new(&g, &w),
            Err(Error::DegenerateProfiles)
        ));
    }
}
