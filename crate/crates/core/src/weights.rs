use crate::error::{Error, Result};
use crate::graph::Graph;

/// Nonnegative per-edge values aligned with a graph's adjacency lists.
///
/// `incident(i)[k]` is the weight of the edge to `g.neighbors(i)[k]`. Values
/// are produced from a symmetric function of the endpoint pair, so both
/// directions of an edge always hold the same number.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    per_node: Vec<Vec<f64>>,
}

impl EdgeWeights {
    /// Evaluates `weight(i, j)` once per edge with `i < j`.
    pub fn from_fn(g: &Graph, mut weight: impl FnMut(usize, usize) -> f64) -> Self {
        let mut per_node: Vec<Vec<f64>> = (0..g.node_count())
            .map(|i| vec![0.0; g.degree(i)])
            .collect();
        for i in 0..g.node_count() {
            for (k, &j) in g.neighbors(i).iter().enumerate() {
                if i < j {
                    let w = weight(i, j);
                    per_node[i][k] = w;
                    let back = g
                        .neighbors(j)
                        .binary_search(&i)
                        .expect("symmetric adjacency");
                    per_node[j][back] = w;
                }
            }
        }
        EdgeWeights { per_node }
    }

    pub fn uniform(g: &Graph, value: f64) -> Self {
        EdgeWeights::from_fn(g, |_, _| value)
    }

    pub fn incident(&self, node: usize) -> &[f64] {
        &self.per_node[node]
    }

    pub fn get(&self, g: &Graph, i: usize, j: usize) -> Option<f64> {
        let k = g.neighbors(i).binary_search(&j).ok()?;
        Some(self.per_node[i][k])
    }

    /// Replaces the weight of every edge incident to a node flagged in `mask`.
    pub fn override_incident(&mut self, g: &Graph, mask: &[bool], value: f64) {
        for i in 0..g.node_count() {
            for (k, &j) in g.neighbors(i).iter().enumerate() {
                if mask[i] || mask[j] {
                    self.per_node[i][k] = value;
                }
            }
        }
    }

    pub fn check_aligned(&self, g: &Graph) -> Result<()> {
        let aligned = self.per_node.len() == g.node_count()
            && (0..g.node_count()).all(|i| self.per_node[i].len() == g.degree(i));
        if aligned {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(
                "edge weights do not match graph adjacency".into(),
            ))
        }
    }
}
