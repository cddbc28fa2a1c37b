//! Small dense real and complex matrices.
//!
//! Everything here runs at desk scale (dimensions ≤ 64), so plain
//! Gaussian elimination and Gram-Schmidt are perfectly adequate.

use num_complex::Complex64;

use crate::error::{GeomError, Result};

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_at(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Commutator \[A, B\] = AB - BA.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Max-abs residual of skewness with respect to an inner product G:
    /// A is skew iff G A + Aᵀ G = 0.
    pub fn skewness_residual(&self, metric: &Self) -> f64 {
        metric
            .matmul(self)
            .add(&self.transpose().matmul(metric))
            .max_abs()
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.sub(&self.transpose()).max_abs()
    }

    /// Cholesky factor L with self = L Lᵀ, or None if not positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if sum <= 0.0 {
                        return None;
                    }
                    l.set(i, j, sum.sqrt());
                } else {
                    l.set(i, j, sum / l.get(j, j));
                }
            }
        }
        Some(l)
    }

    /// Solve self * X = rhs by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let mut piv = col;
            let mut best = a.get(col, col).abs();
            for r in col + 1..n {
                let v = a.get(r, col).abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-13 {
                return Err(GeomError::SingularSystem(format!(
                    "pivot {best:e} at column {col}"
                )));
            }
            if piv != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(piv, j));
                    a.set(col, j, y);
                    a.set(piv, j, x);
                }
                for j in 0..m {
                    let (x, y) = (b.get(col, j), b.get(piv, j));
                    b.set(col, j, y);
                    b.set(piv, j, x);
                }
            }
            let d = a.get(col, col);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col) / d;
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - f * a.get(col, j);
                    a.set(r, j, v);
                }
                for j in 0..m {
                    let v = b.get(r, j) - f * b.get(col, j);
                    b.set(r, j, v);
                }
            }
        }
        for i in 0..n {
            let d = a.get(i, i);
            for j in 0..m {
                let v = b.get(i, j) / d;
                b.set(i, j, v);
            }
        }
        Ok(b)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.rows))
    }

    /// Rank with an absolute pivot threshold, by row echelon reduction.
    pub fn rank(&self, threshold: f64) -> usize {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            if row >= rows {
                break;
            }
            let mut piv = row;
            let mut best = a.get(row, col).abs();
            for r in row + 1..rows {
                let v = a.get(r, col).abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= threshold {
                continue;
            }
            if piv != row {
                for j in 0..cols {
                    let (x, y) = (a.get(row, j), a.get(piv, j));
                    a.set(row, j, y);
                    a.set(piv, j, x);
                }
            }
            let d = a.get(row, col);
            for r in row + 1..rows {
                let f = a.get(r, col) / d;
                if f == 0.0 {
                    continue;
                }
                for j in col..cols {
                    let v = a.get(r, j) - f * a.get(row, j);
                    a.set(r, j, v);
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += a.get(i, j).abs();
                }
            }
            if off < 1e-14 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a.get(p, q);
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eigs
    }
}

/// Orthonormal basis of the span of `vectors`, dropping directions whose
/// residual norm falls below `threshold`.
pub fn orthonormal_span(vectors: &[Vec<f64>], threshold: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // two passes of Gram-Schmidt for numerical stability
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = w.iter().zip(b).map(|(a, c)| a * c).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= dot * bi;
                }
            }
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > threshold {
            for wi in w.iter_mut() {
                *wi /= norm;
            }
            basis.push(w);
        }
    }
    basis
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Orthonormal basis of the null space, with an absolute pivot threshold.
    pub fn null_space(&self, threshold: f64) -> Vec<Vec<Complex64>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row >= rows {
                break;
            }
            let mut piv = row;
            let mut best = a.get(row, col).norm();
            for r in row + 1..rows {
                let v = a.get(r, col).norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= threshold {
                continue;
            }
            if piv != row {
                for j in 0..cols {
                    let (x, y) = (a.get(row, j), a.get(piv, j));
                    a.set(row, j, y);
                    a.set(piv, j, x);
                }
            }
            let d = a.get(row, col);
            for j in 0..cols {
                let v = a.get(row, j) / d;
                a.set(row, j, v);
            }
            for r in 0..rows {
                if r == row {
                    continue;
                }
                let f = a.get(r, col);
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..cols {
                    let v = a.get(r, j) - f * a.get(row, j);
                    a.set(r, j, v);
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        let mut kernel = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Complex64::new(0.0, 0.0); cols];
            v[free] = Complex64::new(1.0, 0.0);
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a.get(r, free);
            }
            kernel.push(v);
        }
        complex_orthonormalize(&kernel, 1e-12)
    }
}

pub fn complex_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn complex_norm(a: &[Complex64]) -> f64 {
    complex_dot(a, a).re.sqrt()
}

pub fn complex_orthonormalize(vectors: &[Vec<Complex64>], threshold: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = complex_dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = complex_norm(&w);
        if n > threshold {
            for wi in w.iter_mut() {
                *wi /= n;
            }
            basis.push(w);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_inverse() {
        let a = RMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let inv = a.inverse().unwrap();
        let id = a.matmul(&inv);
        assert!(id.sub(&RMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn cholesky_detects_indefinite() {
        let a = RMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
        assert!(a.cholesky().is_none());
        let b = RMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]);
        let l = b.cholesky().unwrap();
        assert!(l.matmul(&l.transpose()).sub(&b).max_abs() < 1e-12);
    }

    #[test]
    fn jacobi_eigenvalues() {
        let a = RMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let e = a.symmetric_eigenvalues();
        assert!((e[0] - 1.0).abs() < 1e-10 && (e[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn complex_null_space() {
        // rank-1 matrix on C^3 has a 2-dimensional kernel
        let mut m = CMatrix::zeros(1, 3);
        m.set(0, 0, Complex64::new(1.0, 1.0));
        m.set(0, 2, Complex64::new(0.0, 2.0));
        let k = m.null_space(1e-12);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.matvec(v).iter().map(|z| z.norm()).sum::<f64>() < 1e-12);
        }
    }

    #[test]
    fn span_rank_detection() {
        let v1 = vec![1.0, 0.0, 0.0];
        let v2 = vec![1.0, 1e-12, 0.0];
        let v3 = vec![0.0, 1.0, 0.0];
        let basis = orthonormal_span(&[v1, v2, v3], 1e-8);
        assert_eq!(basis.len(), 2);
    }
}
