//! Small dense linear algebra: row-major matrices, Cholesky, Householder QR,
//! LU, and exact integer rank.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{Float, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `self * self^T`.
    pub fn row_gram(&self) -> Matrix {
        let n = self.rows;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        g
    }

    /// Squared Frobenius norm, i.e. `tr(A A^T)`.
    pub fn frobenius_sq(&self) -> f64 {
        dot(&self.data, &self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

/// `ln det` of a symmetric positive-definite matrix, or `None` if the
/// factorization breaks down.
pub fn cholesky_logdet(a: &Matrix) -> Option<f64> {
    let n = a.rows;
    let mut l = a.data.clone();
    let mut logdet = 0.0;
    for j in 0..n {
        let mut d = l[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0 && d.is_finite()) {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        logdet += 2.0 * djj.ln();
        for i in j + 1..n {
            let mut s = l[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Some(logdet)
}

/// `sum_i ln |R_ii|` from a Householder QR of a tall `m x n` matrix
/// (`m >= n`); equals `ln det(A^T A) / 2`.
pub fn qr_log_abs_diag(a: &Matrix) -> f64 {
    let (m, n) = (a.rows, a.cols);
    assert!(m >= n, "QR needs rows >= cols");
    // Column-major copy so Householder updates walk contiguous memory.
    let mut c: Vec<f64> = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            c.push(a.get(i, j));
        }
    }
    let mut total = 0.0;
    let mut v = vec![0.0; m];
    for j in 0..n {
        let col = &c[j * m..(j + 1) * m];
        let norm = dot(&col[j..], &col[j..]).sqrt();
        if norm == 0.0 {
            return f64::NEG_INFINITY;
        }
        let alpha = if col[j] > 0.0 { -norm } else { norm };
        total += alpha.abs().ln();
        v[j..m].copy_from_slice(&col[j..m]);
        v[j] -= alpha;
        let vnorm2 = dot(&v[j..m], &v[j..m]);
        if vnorm2 == 0.0 {
            continue;
        }
        for jj in j + 1..n {
            let cc = &mut c[jj * m..(jj + 1) * m];
            let s = 2.0 * dot(&v[j..m], &cc[j..m]) / vnorm2;
            for i in j..m {
                cc[i] -= s * v[i];
            }
        }
    }
    total
}

/// Determinant by LU with partial pivoting.
pub fn lu_det(a: &Matrix) -> f64 {
    let n = a.rows;
    let mut m = a.data.clone();
    let mut det = 1.0;
    for j in 0..n {
        let p = (j..n).max_by(|&x, &y| m[x * n + j].abs().total_cmp(&m[y * n + j].abs())).unwrap();
        if m[p * n + j] == 0.0 {
            return 0.0;
        }
        if p != j {
            for k in 0..n {
                m.swap(j * n + k, p * n + k);
            }
            det = -det;
        }
        let piv = m[j * n + j];
        det *= piv;
        for i in j + 1..n {
            let f = m[i * n + j] / piv;
            for k in j..n {
                m[i * n + k] -= f * m[j * n + k];
            }
        }
    }
    det
}

/// Numerical rank by Gaussian elimination with full pivoting; pivots below
/// `tol` times the largest entry count as zero.
pub fn float_rank(a: &Matrix, tol: f64) -> usize {
    let (r, c) = (a.rows, a.cols);
    let mut m = a.data.clone();
    let scale = m.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    let mut row_used = vec![false; r];
    let mut col_used = vec![false; c];
    loop {
        let mut best = (0.0, 0, 0);
        for i in (0..r).filter(|&i| !row_used[i]) {
            for j in (0..c).filter(|&j| !col_used[j]) {
                let v = m[i * c + j].abs();
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        if best.0 <= tol * scale {
            return rank;
        }
        let (_, pi, pj) = best;
        row_used[pi] = true;
        col_used[pj] = true;
        rank += 1;
        let piv = m[pi * c + pj];
        for i in (0..r).filter(|&i| !row_used[i]) {
            let f = m[i * c + pj] / piv;
            for j in 0..c {
                m[i * c + j] -= f * m[pi * c + j];
            }
        }
    }
}

/// Exact rank of an integer matrix (row-major, `rows x cols`) by
/// fraction-free Bareiss elimination. Falls back to big integers if `i128`
/// would overflow.
pub fn exact_rank(entries: &[i64], rows: usize, cols: usize) -> usize {
    let m: Vec<i128> = entries.iter().map(|&v| i128::from(v)).collect();
    match bareiss_i128(m, rows, cols) {
        Some(r) => r,
        None => {
            let m: Vec<BigInt> = entries.iter().map(|&v| BigInt::from(v)).collect();
            bareiss_big(m, rows, cols)
        }
    }
}

fn bareiss_i128(mut m: Vec<i128>, rows: usize, cols: usize) -> Option<usize> {
    let mut prev: i128 = 1;
    let mut rank = 0;
    for j in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| m[i * cols + j] != 0) else { continue };
        if p != rank {
            for k in 0..cols {
                m.swap(p * cols + k, rank * cols + k);
            }
        }
        let piv = m[rank * cols + j];
        for i in rank + 1..rows {
            let lead = m[i * cols + j];
            for k in j..cols {
                let a = piv.checked_mul(m[i * cols + k])?;
                let b = lead.checked_mul(m[rank * cols + k])?;
                m[i * cols + k] = a.checked_sub(b)? / prev;
            }
        }
        prev = piv;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(mut m: Vec<BigInt>, rows: usize, cols: usize) -> usize {
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for j in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i * cols + j].is_zero()) else { continue };
        if p != rank {
            for k in 0..cols {
                m.swap(p * cols + k, rank * cols + k);
            }
        }
        let piv = m[rank * cols + j].clone();
        for i in rank + 1..rows {
            let lead = m[i * cols + j].clone();
            for k in j..cols {
                let v = (&piv * &m[i * cols + k] - &lead * &m[rank * cols + k]) / &prev;
                m[i * cols + k] = v;
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Norm of the part of `y` outside the span of the chosen columns of `a`,
/// by modified Gram-Schmidt with one reorthogonalization pass. Columns that
/// are numerically dependent on earlier ones are skipped.
pub fn span_residual(a: &Matrix, cols: &[usize], y: &[f64]) -> f64 {
    let m = a.rows;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for &j in cols {
        let mut v = a.column(j);
        let start = dot(&v, &v).sqrt();
        for _ in 0..2 {
            for q in &basis {
                let s = dot(q, &v);
                for i in 0..m {
                    v[i] -= s * q[i];
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 * start && norm > 0.0 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    let mut r = y.to_vec();
    for _ in 0..2 {
        for q in &basis {
            let s = dot(q, &r);
            for i in 0..m {
                r[i] -= s * q[i];
            }
        }
    }
    dot(&r, &r).sqrt()
}
