use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A `p x q` grid of nonnegative exponents, the argument of `I(a)`.
///
/// The `0 x 0` matrix stands for the empty product (integral 1).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl ExponentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::contract(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if (rows == 0) != (cols == 0) {
            return Err(Error::contract("a matrix with zero rows must have zero columns"));
        }
        Ok(ExponentMatrix { rows, cols, entries })
    }

    pub fn empty() -> Self {
        ExponentMatrix { rows: 0, cols: 0, entries: Vec::new() }
    }

    /// Builds from row slices; ragged input is rejected.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::contract(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    r.len()
                )));
            }
            entries.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, entries)
    }

    /// Two-row matrix with top row `a` and bottom row `b`.
    pub fn two_row(a: &[u32], b: &[u32]) -> Result<Self> {
        Self::from_rows(&[a, b])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn total_degree(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// `k = (sum a_ij) / 2` when the total is even.
    pub fn half_degree(&self) -> Option<usize> {
        let t = self.total_degree();
        (t % 2 == 0).then_some(t as usize / 2)
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        ExponentMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn all_even(&self) -> bool {
        self.entries.iter().all(|&x| x % 2 == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ExponentMatrix {
    /// Row-semicolon, comma-separated: `2,0;0,2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}
