//! Small dense linear algebra: a row-major matrix and a one-sided Jacobi SVD.

use std::ops::{Index, IndexMut};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self[(i, j)])
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Copy of the first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(self.rows, k);
        for i in 0..self.rows {
            m.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ` with `s` descending.
///
/// For an `m × n` input, `U` is `m × k`, `V` is `n × k` and `k = min(m, n)`.
/// Columns of `U` belonging to zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD.
///
/// Rotations orthogonalize column pairs until every pair is numerically
/// orthogonal. The method is accurate for small singular values and runs in
/// a fixed operation order, so results are bit-reproducible.
pub fn svd(a: &Matrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.transpose());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j).collect()).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let tol = f64::EPSILON * m.max(1) as f64;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold((0.0, 0.0, 0.0), |(a, b, g), (&x, &y)| (a + x * x, b + y * y, g + x * y));
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let mut u = Matrix::zeros(m, n);
    let mut v = Matrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        s.push(sigma);
        if sigma > 0.0 {
            for i in 0..m {
                u[(i, k)] = cols[j][i] / sigma;
            }
        }
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }
    Svd { u, s, v }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(d: &Svd) -> Matrix {
        let (m, n) = (d.u.rows(), d.v.rows());
        let mut out = Matrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                out[(i, j)] = (0..d.s.len()).map(|k| d.u[(i, k)] * d.s[k] * d.v[(j, k)]).sum();
            }
        }
        out
    }

    fn assert_close(a: &Matrix, b: &Matrix, tol: f64) {
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                assert!((a[(i, j)] - b[(i, j)]).abs() < tol, "({i},{j}) {} vs {}", a[(i, j)], b[(i, j)]);
            }
        }
    }

    #[test]
    fn known_singular_values() {
        // [[3, 0], [4, 5]] has singular values sqrt(45) and sqrt(5)
        let a = Matrix::from_rows(&[vec![3.0, 0.0], vec![4.0, 5.0]]);
        let d = svd(&a);
        assert!((d.s[0] - 45f64.sqrt()).abs() < 1e-14);
        assert!((d.s[1] - 5f64.sqrt()).abs() < 1e-14);
        assert_close(&reconstruct(&d), &a, 1e-13);
    }

    #[test]
    fn wide_and_tall_inputs_reconstruct() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 0.0, -1.0], vec![0.5, -3.0, 2.0, 4.0], vec![2.0, 0.0, 1.0, 1.0]]);
        for m in [a.clone(), a.transpose()] {
            let d = svd(&m);
            assert_eq!(d.s.len(), 3);
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
            assert_close(&reconstruct(&d), &m, 1e-12);
            for p in 0..3 {
                for q in 0..3 {
                    let dot: f64 = d.v.column(p).zip(d.v.column(q)).map(|(x, y)| x * y).sum();
                    assert!((dot - if p == q { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rank_deficient_input() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        let d = svd(&a);
        assert!((d.s[0] - 70f64.sqrt()).abs() < 1e-13);
        assert!(d.s[1] < 1e-14);
    }
}
