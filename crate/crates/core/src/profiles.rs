use crate::error::{Error, Result};

/// Row-major `n × m` matrix of per-node attribute values.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl ProfileMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::InvalidInput(
                "profiles need at least one attribute".into(),
            ));
        }
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Ok(ProfileMatrix { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} attributes, expected {cols}",
                rows[bad].len()
            )));
        }
        ProfileMatrix::new(rows.len(), cols, rows.concat())
    }

    /// Single-attribute matrix from one value per node.
    pub fn from_column(values: Vec<f64>) -> Self {
        ProfileMatrix {
            rows: values.len(),
            cols: 1,
            values,
        }
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns differ in length".into()));
        }
        let mut values = vec![0.0; rows * cols];
        for (a, column) in columns.iter().enumerate() {
            for (i, &v) in column.iter().enumerate() {
                values[i * cols + a] = v;
            }
        }
        ProfileMatrix::new(rows, cols, values)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        ProfileMatrix::new(rows, cols, vec![value; rows * cols])
    }

    /// Number of nodes.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of attributes.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, node: usize, attr: usize) -> f64 {
        self.values[node * self.cols + attr]
    }

    pub fn set(&mut self, node: usize, attr: usize, value: f64) {
        self.values[node * self.cols + attr] = value;
    }

    pub fn row(&self, node: usize) -> &[f64] {
        &self.values[node * self.cols..(node + 1) * self.cols]
    }

    pub fn column(&self, attr: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, attr)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|a| self.column(a)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Rows `nodes[0], nodes[1], ...` as a new matrix.
    pub fn select_rows(&self, nodes: &[usize]) -> ProfileMatrix {
        let values = nodes
            .iter()
            .flat_map(|&i| self.row(i).iter().copied())
            .collect();
        ProfileMatrix {
            rows: nodes.len(),
            cols: self.cols,
            values,
        }
    }

    /// Appends rows below the existing ones.
    pub fn append_rows(&mut self, rows: &[Vec<f64>]) -> Result<()> {
        for row in rows {
            if row.len() != self.cols {
                return Err(Error::DimensionMismatch(format!(
                    "row has {} attributes, expected {}",
                    row.len(),
                    self.cols
                )));
            }
            self.values.extend_from_slice(row);
            self.rows += 1;
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ProfileMatrix {
        ProfileMatrix {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn check_rows(&self, expected: usize) -> Result<()> {
        if self.rows == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "profile matrix has {} rows, graph has {expected} nodes",
                self.rows
            )))
        }
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &ProfileMatrix) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
