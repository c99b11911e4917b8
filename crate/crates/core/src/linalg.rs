//! Dense linear algebra over an arbitrary [`Scalar`].
//!
//! Everything here is sized for weight spaces and coefficient systems of a
//! few dozen rows, so the implementations favor exactness and determinism
//! over asymptotics: Gaussian elimination with magnitude pivoting, reduced
//! row echelon kernels for exact scalars, and a Jacobi eigensolver on A^H A
//! for singular-value based rank decisions in float mode.

use crate::error::{Error, Result};
use crate::scalar::{Complex64, Scalar};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conjugate_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conjugate())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = S::zero();
            for t in 0..self.cols {
                acc = acc + self[(i, t)].clone() * other[(t, j)].clone();
            }
            acc
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() * c.clone()
        })
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_zero_within(&self, tol: f64, scale: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol, scale))
    }

    /// Solve `self * x = rhs` for square systems, Gaussian elimination with
    /// partial pivoting by magnitude.
    pub fn solve(&self, rhs: &[S]) -> Result<Vec<S>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.len());
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        let scale = a.max_magnitude();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| {
                    a[(p, col)]
                        .magnitude()
                        .partial_cmp(&a[(q, col)].magnitude())
                        .unwrap()
                })
                .unwrap();
            if a[(pivot, col)].is_negligible(1e-14, scale) {
                return Err(Error::SingularSystem(format!("pivot {col} vanished")));
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                b.swap(pivot, col);
            }
            let inv = S::one() / a[(col, col)].clone();
            for r in col + 1..n {
                let factor = a[(r, col)].clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let upd = a[(col, c)].clone() * factor.clone();
                    a[(r, c)] = a[(r, c)].clone() - upd;
                }
                let upd = b[col].clone() * factor;
                b[r] = b[r].clone() - upd;
            }
        }
        for col in (0..n).rev() {
            let mut acc = b[col].clone();
            for c in col + 1..n {
                acc = acc - a[(col, c)].clone() * b[c].clone();
            }
            b[col] = acc / a[(col, col)].clone();
        }
        Ok(b)
    }

    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return S::one();
        }
        let mut a = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| {
                    a[(p, col)]
                        .magnitude()
                        .partial_cmp(&a[(q, col)].magnitude())
                        .unwrap()
                })
                .unwrap();
            if a[(pivot, col)].is_zero() {
                return S::zero();
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            det = det * a[(col, col)].clone();
            let inv = S::one() / a[(col, col)].clone();
            for r in col + 1..n {
                let factor = a[(r, col)].clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let upd = a[(col, c)].clone() * factor.clone();
                    a[(r, c)] = a[(r, c)].clone() - upd;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    /// Exact scalars only: zero tests are algebraic.
    fn rref(&mut self) -> Vec<usize> {
        assert!(S::EXACT, "rref requires exact arithmetic");
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            let Some(pivot) = (lead..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(pivot, lead);
            let inv = S::one() / self[(lead, col)].clone();
            for c in col..self.cols {
                self[(lead, c)] = self[(lead, c)].clone() * inv.clone();
            }
            for r in 0..self.rows {
                if r != lead && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for c in col..self.cols {
                        let upd = self[(lead, c)].clone() * factor.clone();
                        self[(r, c)] = self[(r, c)].clone() - upd;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        pivots
    }

    /// Canonical kernel basis from the reduced row echelon form,
    /// one vector per free column, in ascending free-column order.
    pub fn nullspace_exact(&self) -> Vec<Vec<S>> {
        let mut work = self.clone();
        let pivots = work.rref();
        let mut basis = Vec::new();
        let mut pivot_row = std::collections::BTreeMap::new();
        for (row, col) in pivots.iter().copied().enumerate() {
            pivot_row.insert(col, row);
        }
        for free in 0..self.cols {
            if pivot_row.contains_key(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (&col, &row) in &pivot_row {
                v[col] = -work[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, unitary V with eigenvector columns), eigenvalues ascending.
pub fn hermitian_eigen(b: &Matrix<Complex64>) -> (Vec<f64>, Matrix<Complex64>) {
    let n = b.nrows();
    assert_eq!(n, b.ncols());
    let mut a = b.clone();
    let mut v = Matrix::<Complex64>::identity(n);
    let scale = a.max_magnitude().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let beta = a[(p, q)].norm();
                if beta <= 1e-18 * scale {
                    continue;
                }
                let phase = a[(p, q)] / beta;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Zero a[p][q] with the unitary [[c, -s*phase],[s*conj(phase), c]].
                let tau = (app - aqq) / (2.0 * beta);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let mut u = Matrix::<Complex64>::identity(n);
                u[(p, p)] = Complex64::new(c, 0.0);
                u[(q, q)] = Complex64::new(c, 0.0);
                u[(p, q)] = -phase * s;
                u[(q, p)] = phase.conj() * s;
                a = u.conjugate_transpose().mul(&a).mul(&u);
                v = v.mul(&u);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigs: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vecs = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (eigs, vecs)
}

/// Singular values of a complex matrix, ascending, via the spectrum of A^H A.
pub fn singular_values(a: &Matrix<Complex64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return vec![];
    }
    let gram = a.conjugate_transpose().mul(a);
    let (eigs, _) = hermitian_eigen(&gram);
    eigs.iter().map(|&l| l.max(0.0).sqrt()).collect()
}

/// Kernel decisions in float mode: right singular vectors whose singular
/// value is at most `rel_tol` times the largest one.
pub fn nullspace_svd(a: &Matrix<Complex64>, rel_tol: f64) -> Vec<Vec<Complex64>> {
    let n = a.ncols();
    if n == 0 {
        return vec![];
    }
    if a.nrows() == 0 {
        return (0..n)
            .map(|j| {
                let mut v = vec![Complex64::zero(); n];
                v[j] = Complex64::one();
                v
            })
            .collect();
    }
    let gram = a.conjugate_transpose().mul(a);
    let (eigs, vecs) = hermitian_eigen(&gram);
    let sigma: Vec<f64> = eigs.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let sigma_max = sigma.last().copied().unwrap_or(0.0);
    let mut basis = Vec::new();
    for (j, &s) in sigma.iter().enumerate() {
        if s <= rel_tol * sigma_max.max(f64::MIN_POSITIVE) || sigma_max == 0.0 {
            basis.push(vecs.column(j));
        }
    }
    basis
}

/// Dispatch between the exact and float kernel routines.
pub trait NullspaceScalar: Scalar {
    fn nullspace(a: &Matrix<Self>, rel_tol: f64) -> Vec<Vec<Self>>;
}

impl NullspaceScalar for crate::scalar::Rational {
    fn nullspace(a: &Matrix<Self>, _rel_tol: f64) -> Vec<Vec<Self>> {
        a.nullspace_exact()
    }
}

impl NullspaceScalar for Complex64 {
    fn nullspace(a: &Matrix<Self>, rel_tol: f64) -> Vec<Vec<Self>> {
        nullspace_svd(a, rel_tol)
    }
}
