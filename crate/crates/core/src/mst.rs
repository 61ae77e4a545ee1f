use crate::error::{Error, Result};

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Minimum spanning tree of the complete graph whose `(i, j)` weight is
/// `weights[i][j]` (only the upper triangle is read).
///
/// Equal weights are resolved by the smaller `(i, j)` pair, so the result is
/// fully determined by the input. Returned edges have `i < j`.
pub fn minimum_spanning_tree(weights: &[Vec<f64>]) -> Result<Vec<(usize, usize)>> {
    let k = weights.len();
    let mut candidates = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for (i, row) in weights.iter().enumerate() {
        if row.len() != k {
            return Err(Error::DimensionMismatch(
                "weight matrix is not square".into(),
            ));
        }
        for (j, &w) in row.iter().enumerate().skip(i + 1) {
            if !w.is_finite() {
                return Err(Error::SeedsDisconnected);
            }
            candidates.push((w, i, j));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut sets = DisjointSets::new(k);
    let mut tree = Vec::with_capacity(k.saturating_sub(1));
    for (_, i, j) in candidates {
        if sets.union(i, j) {
            tree.push((i, j));
            if tree.len() + 1 == k {
                break;
            }
        }
    }
    Ok(tree)
}
