use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An m × n matrix of binary observations with named, ranked variables.
///
/// Stored column-major: every statistic the learner computes walks whole
/// columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryDataset {
    names: Vec<String>,
    rank: Vec<u32>,
    columns: Vec<Vec<u8>>,
}

impl BinaryDataset {
    /// Build from column vectors. Checks every invariant of the type.
    pub fn from_columns(names: Vec<String>, rank: Vec<u32>, columns: Vec<Vec<u8>>) -> Result<Self> {
        let n = columns.len();
        if names.len() != n || rank.len() != n {
            return Err(Error::Invalid(format!(
                "{} columns but {} names and {} ranks",
                n,
                names.len(),
                rank.len()
            )));
        }
        let m = columns.first().map_or(0, Vec::len);
        if m == 0 {
            return Err(Error::Invalid("dataset needs at least one row".into()));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != m {
                return Err(Error::Invalid(format!(
                    "column {} has {} rows, expected {}",
                    names[j],
                    col.len(),
                    m
                )));
            }
            if let Some(row) = col.iter().position(|&v| v > 1) {
                return Err(Error::Invalid(format!(
                    "cell (row {}, variable {}) holds {}, expected 0 or 1",
                    row, names[j], col[row]
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::Invalid(format!("duplicate variable name {name:?}")));
            }
        }
        Ok(Self { names, rank, columns })
    }

    /// Build from rows; `rows[r][j]` is the value of variable `j` in row `r`.
    pub fn from_rows(names: Vec<String>, rank: Vec<u32>, rows: &[Vec<u8>]) -> Result<Self> {
        let n = names.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(Error::Invalid(format!("row {} has {} values, expected {}", r, row.len(), n)));
        }
        let columns = (0..n).map(|j| rows.iter().map(|row| row[j]).collect()).collect();
        Self::from_columns(names, rank, columns)
    }

    /// Default names `X0, X1, ...` and all ranks zero.
    pub fn unnamed(columns: Vec<Vec<u8>>) -> Result<Self> {
        let n = columns.len();
        Self::from_columns(default_names(n), vec![0; n], columns)
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn m(&self) -> usize {
        self.columns[0].len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> &[u32] {
        &self.rank
    }

    pub fn column(&self, j: usize) -> &[u8] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<u8>] {
        &self.columns
    }

    pub fn value(&self, row: usize, j: usize) -> u8 {
        self.columns[j][row]
    }

    pub fn row(&self, r: usize) -> Vec<u8> {
        self.columns.iter().map(|c| c[r]).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j < self.n() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: j, n: self.n() })
        }
    }

    /// New dataset made of the given rows (repeats allowed), same names and ranks.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        assert!(!rows.is_empty());
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect())
            .collect();
        Self {
            names: self.names.clone(),
            rank: self.rank.clone(),
            columns,
        }
    }

    /// Keep only the listed variables, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            names: cols.iter().map(|&j| self.names[j].clone()).collect(),
            rank: cols.iter().map(|&j| self.rank[j]).collect(),
            columns: cols.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    pub fn with_rank(mut self, rank: Vec<u32>) -> Result<Self> {
        if rank.len() != self.n() {
            return Err(Error::Invalid(format!("{} ranks for {} variables", rank.len(), self.n())));
        }
        self.rank = rank;
        Ok(self)
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}
