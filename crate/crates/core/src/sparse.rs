//! Compressed sparse row storage.

use serde::{Deserialize, Serialize};

/// A CSR matrix. Column indices within each row are strictly increasing and
/// explicit zeros are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<T>,
}

pub trait Zero: Copy + PartialEq {
    const ZERO: Self;
}

impl Zero for u64 {
    const ZERO: Self = 0;
}

impl Zero for f64 {
    const ZERO: Self = 0.0;
}

impl<T: Zero> CsrMatrix<T> {
    /// Builds a matrix from per-row `(column, value)` lists. Entries within a
    /// row may come in any order but must not repeat a column; zeros are dropped.
    ///
    /// Panics if a column index is out of range or repeated.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<(usize, T)>>) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for mut row in rows.into_iter() {
            row.sort_by_key(|&(j, _)| j);
            for w in row.windows(2) {
                assert!(w[0].0 != w[1].0, "duplicate column {} in row", w[0].0);
            }
            for (j, v) in row {
                assert!(j < n_cols, "column {j} out of range {n_cols}");
                if v != T::ZERO {
                    indices.push(j);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix {
            n_rows: indptr.len() - 1,
            n_cols,
            indptr,
            indices,
            data,
        }
    }

    pub fn from_dense(dense: &[Vec<T>]) -> Self {
        let n_cols = dense.first().map_or(0, Vec::len);
        let rows = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), n_cols, "ragged dense input");
                r.iter().copied().enumerate().collect()
            })
            .collect();
        Self::from_rows(n_cols, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// Stored entries of row `i` as `(column, value)` in column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.indptr[i]..self.indptr[i + 1];
        self.indices[span.clone()].iter().copied().zip(self.data[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let span = self.indptr[i]..self.indptr[i + 1];
        match self.indices[span.clone()].binary_search(&j) {
            Ok(k) => self.data[span.start + k],
            Err(_) => T::ZERO,
        }
    }

    /// All stored entries as `(row, column, value)`, row-major.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n_rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::ZERO; self.n_cols]; self.n_rows];
        for (i, j, v) in self.iter() {
            out[i][j] = v;
        }
        out
    }

    /// Applies `f` to every stored entry; results equal to zero are dropped,
    /// so the pattern can only shrink.
    pub fn map<U: Zero>(&self, mut f: impl FnMut(usize, usize, T) -> U) -> CsrMatrix<U> {
        let rows = (0..self.n_rows)
            .map(|i| self.row(i).map(|(j, v)| (j, f(i, j, v))).collect())
            .collect();
        CsrMatrix::from_rows(self.n_cols, rows)
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let rows = keep.iter().map(|&i| self.row(i).collect()).collect();
        Self::from_rows(self.n_cols, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_and_read_back() {
        let m = CsrMatrix::from_rows(3, vec![vec![(2, 5u64), (0, 1)], vec![], vec![(1, 0), (1 + 1, 7)]]);
        assert_eq!(m.n_rows(), 3);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 2), 5);
        assert_eq!(m.get(2, 1), 0);
        assert_eq!(m.row(0).collect::<Vec<_>>(), vec![(0, 1), (2, 5)]);
        assert_eq!(m.to_dense(), vec![vec![1, 0, 5], vec![0, 0, 0], vec![0, 0, 7]]);
        assert_eq!(CsrMatrix::from_dense(&m.to_dense()), m);
    }

    #[test]
    fn map_drops_new_zeros() {
        let m = CsrMatrix::from_dense(&[vec![1u64, 2], vec![3, 0]]);
        let w = m.map(|_, _, v| if v == 2 { 0.0 } else { v as f64 });
        assert_eq!(w.nnz(), 2);
    }

    #[test]
    #[should_panic]
    fn repeated_column_panics() {
        CsrMatrix::from_rows(2, vec![vec![(1, 1u64), (1, 2)]]);
    }
}
