//! Sparse row-major feature matrices with named column blocks.

use crate::error::{Error, Result};

/// Named half-open column range `[start, end)` inside a feature matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureBlock {
    pub name: String,
    pub start: usize,
    pub end: usize,
}

impl FeatureBlock {
    pub fn new(name: impl Into<String>, start: usize, end: usize) -> Self {
        FeatureBlock {
            name: name.into(),
            start,
            end,
        }
    }

    pub fn width(&self) -> usize {
        self.end - self.start
    }
}

/// Sparse real-valued feature rows; every feature family emits one of these
/// and independent families concatenate horizontally.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseFeatureMatrix {
    n_cols: usize,
    rows: Vec<Vec<(u32, f64)>>,
    blocks: Vec<FeatureBlock>,
}

impl SparseFeatureMatrix {
    /// Wrap pre-built rows, validating the column invariants.
    pub fn from_rows(
        n_cols: usize,
        rows: Vec<Vec<(u32, f64)>>,
        blocks: Vec<FeatureBlock>,
    ) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            let mut prev: Option<u32> = None;
            for &(col, v) in row {
                if col as usize >= n_cols {
                    return Err(Error::input(format!(
                        "row {i}: column {col} out of range (n_cols = {n_cols})"
                    )));
                }
                if let Some(p) = prev {
                    if col <= p {
                        return Err(Error::input(format!(
                            "row {i}: columns not strictly increasing at {col}"
                        )));
                    }
                }
                if !v.is_finite() {
                    return Err(Error::input(format!("row {i}: non-finite value at {col}")));
                }
                prev = Some(col);
            }
        }
        for b in &blocks {
            if b.start > b.end || b.end > n_cols {
                return Err(Error::input(format!(
                    "block {} range {}..{} exceeds n_cols = {n_cols}",
                    b.name, b.start, b.end
                )));
            }
        }
        Ok(SparseFeatureMatrix {
            n_cols,
            rows,
            blocks,
        })
    }

    /// All-empty matrix with `n_rows` rows and zero columns.
    pub fn empty(n_rows: usize) -> Self {
        SparseFeatureMatrix {
            n_cols: 0,
            rows: vec![Vec::new(); n_rows],
            blocks: Vec::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn blocks(&self) -> &[FeatureBlock] {
        &self.blocks
    }

    pub fn row(&self, i: usize) -> &[(u32, f64)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Value at `(i, j)`; absent entries are 0.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.rows[i].binary_search_by_key(&(j as u32), |&(c, _)| c) {
            Ok(k) => self.rows[i][k].1,
            Err(_) => 0.0,
        }
    }

    /// Dot product of row `i` with a dense vector.
    pub fn row_dot(&self, i: usize, dense: &[f64]) -> f64 {
        debug_assert_eq!(dense.len(), self.n_cols);
        self.rows[i]
            .iter()
            .map(|&(c, v)| v * dense[c as usize])
            .sum()
    }

    /// Select a subset of rows (by index) into a new matrix sharing the
    /// column layout.
    pub fn select_rows(&self, indices: &[usize]) -> SparseFeatureMatrix {
        SparseFeatureMatrix {
            n_cols: self.n_cols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            blocks: self.blocks.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|&(_, v)| v.abs()))
            .fold(0.0, f64::max)
    }
}

/// Horizontally concatenate feature blocks, shifting column offsets and
/// keeping per-family block metadata.
pub fn concat_blocks(parts: &[SparseFeatureMatrix]) -> Result<SparseFeatureMatrix> {
    if parts.is_empty() {
        return Err(Error::input("concat_blocks needs at least one matrix"));
    }
    let n_rows = parts[0].n_rows();
    for (k, p) in parts.iter().enumerate() {
        if p.n_rows() != n_rows {
            return Err(Error::input(format!(
                "row-count mismatch: part 0 has {n_rows}, part {k} has {}",
                p.n_rows()
            )));
        }
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    let n_cols: usize = parts.iter().map(|p| p.n_cols()).sum();
    let mut rows: Vec<Vec<(u32, f64)>> = (0..n_rows)
        .map(|i| {
            let cap: usize = parts.iter().map(|p| p.row(i).len()).sum();
            Vec::with_capacity(cap)
        })
        .collect();
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for p in parts {
        for i in 0..n_rows {
            for &(c, v) in p.row(i) {
                rows[i].push((c + offset as u32, v));
            }
        }
        for b in p.blocks() {
            blocks.push(FeatureBlock::new(
                b.name.clone(),
                b.start + offset,
                b.end + offset,
            ));
        }
        offset += p.n_cols();
    }
    SparseFeatureMatrix::from_rows(n_cols, rows, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize, name: &str) -> SparseFeatureMatrix {
        let rows = (0..n).map(|i| vec![(i as u32, 1.0)]).collect();
        SparseFeatureMatrix::from_rows(n, rows, vec![FeatureBlock::new(name, 0, n)]).unwrap()
    }

    #[test]
    fn concat_two_identities() {
        let out = concat_blocks(&[identity(2, "a"), identity(2, "b")]).unwrap();
        assert_eq!(out.n_cols(), 4);
        assert_eq!(out.row(0), &[(0, 1.0), (2, 1.0)]);
        assert_eq!(out.row(1), &[(1, 1.0), (3, 1.0)]);
        assert_eq!(out.blocks().len(), 2);
        assert_eq!(out.blocks()[1].start, 2);
        assert_eq!(out.blocks()[1].end, 4);
    }

    #[test]
    fn concat_single_is_identity() {
        let m = identity(3, "only");
        let out = concat_blocks(&[m.clone()]).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn concat_rejects_row_mismatch() {
        assert!(concat_blocks(&[identity(2, "a"), identity(3, "b")]).is_err());
    }

    #[test]
    fn invariant_checks() {
        assert!(SparseFeatureMatrix::from_rows(2, vec![vec![(2, 1.0)]], vec![]).is_err());
        assert!(SparseFeatureMatrix::from_rows(2, vec![vec![(1, 1.0), (1, 2.0)]], vec![]).is_err());
        assert!(SparseFeatureMatrix::from_rows(2, vec![vec![(0, f64::NAN)]], vec![]).is_err());
    }
}
