//! Dense complex matrices and the few decompositions the crate needs.
//!
//! Storage is a plain column-major `Vec<Complex64>` so that assembly can
//! hand out disjoint column slices to worker threads; the heavy
//! factorizations (Hermitian eigendecomposition, singular values, LU) are
//! delegated to `faer` through lightweight views.

use faer::linalg::solvers::Solve;
use faer::mat::MatRef;
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{KsError, Result};

/// Dense complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, data: vec![Complex64::new(0.0, 0.0); n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n_rows, n_cols);
        for j in 0..n_cols {
            for i in 0..n_rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Column-major backing store, for assembly loops that fill columns in
    /// parallel.
    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn as_faer(&self) -> MatRef<'_, Complex64> {
        MatRef::from_column_major_slice(&self.data, self.n_rows, self.n_cols)
    }

    pub fn from_faer(m: MatRef<'_, Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(other.data.iter()) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(other.data.iter()) {
            *v -= w;
        }
        out
    }

    /// self + s on the diagonal.
    pub fn add_diag(&self, s: Complex64) -> Self {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.n_rows {
            out[(i, i)] += s;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n_cols, other.n_rows);
        let prod: Mat<Complex64> = self.as_faer() * other.as_faer();
        Self::from_faer(prod.as_ref())
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n_cols, v.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_rows];
        for j in 0..self.n_cols {
            let col = self.col(j);
            let vj = v[j];
            for i in 0..self.n_rows {
                out[i] += col[i] * vj;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.data.is_empty() {
            return Ok(0.0);
        }
        let sv = self
            .as_faer()
            .singular_values()
            .map_err(|e| KsError::Numeric(format!("singular value decomposition failed: {e:?}")))?;
        Ok(sv.first().copied().unwrap_or(0.0))
    }

    /// All singular values, nonincreasing.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if self.data.is_empty() {
            return Ok(Vec::new());
        }
        self.as_faer()
            .singular_values()
            .map_err(|e| KsError::Numeric(format!("singular value decomposition failed: {e:?}")))
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The caller asserts
    /// Hermitian-ness; only the lower triangle is read.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        assert!(self.is_square());
        self.as_faer()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| KsError::Numeric(format!("hermitian eigensolve failed: {e:?}")))
    }

    /// Hermitian eigendecomposition: (ascending eigenvalues, unitary matrix
    /// of column eigenvectors).
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMat)> {
        assert!(self.is_square());
        let evd = self
            .as_faer()
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| KsError::Numeric(format!("hermitian eigensolve failed: {e:?}")))?;
        let n = self.n_rows;
        let vals: Vec<f64> = (0..n).map(|k| evd.S()[k].re).collect();
        let vecs = CMat::from_fn(n, n, |i, j| evd.U()[(i, j)]);
        Ok((vals, vecs))
    }

    /// Solves X * A = B for X (right division), A = self.
    pub fn solve_right(&self, b: &Self) -> Result<CMat> {
        assert!(self.is_square());
        assert_eq!(b.n_cols, self.n_rows);
        let lu = self.as_faer().partial_piv_lu();
        let mut x = Mat::from_fn(b.n_rows, b.n_cols, |i, j| b[(i, j)]);
        lu.rsolve_in_place(&mut x);
        let out = CMat::from_faer(x.as_ref());
        if out.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KsError::Numeric("linear solve produced non-finite entries".into()));
        }
        Ok(out)
    }

    /// Largest |a_ij - (-conj(a_ji))| over all entries; zero iff the matrix
    /// is exactly skew-Hermitian.
    pub fn skew_hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for j in 0..self.n_cols {
            for i in 0..=j {
                let d = (self[(i, j)] + self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[j * self.n_rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.n_rows + i]
    }
}

/// Runs `fill(j, column)` for every column, in parallel when the `parallel`
/// feature is enabled. Column indices are absolute; slices are disjoint.
pub(crate) fn for_each_column<F>(data: &mut [Complex64], n_rows: usize, fill: F)
where
    F: Fn(usize, &mut [Complex64]) + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(n_rows).enumerate().for_each(|(j, col)| fill(j, col));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (j, col) in data.chunks_mut(n_rows).enumerate() {
            fill(j, col);
        }
    }
}

/// Sequential variant of [`for_each_column`], kept unconditionally for the
/// benchmark comparison and as the fallback path.
pub(crate) fn for_each_column_sequential<F>(data: &mut [Complex64], n_rows: usize, fill: F)
where
    F: Fn(usize, &mut [Complex64]),
{
    for (j, col) in data.chunks_mut(n_rows).enumerate() {
        fill(j, col);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_and_adjoint_agree_with_hand_computation() {
        let a = CMat::from_fn(2, 2, |i, j| c((i + 1) as f64, j as f64));
        let b = CMat::from_fn(2, 2, |i, j| c(0.0, (i * 2 + j) as f64));
        let p = a.matmul(&b);
        // row 0 of a: (1, 1+i); col 0 of b: (0, 2i)
        assert!((p[(0, 0)] - (c(1.0, 0.0) * c(0.0, 0.0) + c(1.0, 1.0) * c(0.0, 2.0))).norm() < 1e-15);
        let adj = a.adjoint();
        assert_eq!(adj[(1, 0)], a[(0, 1)].conj());
    }

    #[test]
    fn hermitian_eigenvalues_of_2x2_skew_block() {
        // -i * [[0, a], [-a, 0]] has eigenvalues +-a for real a.
        let a = 0.7;
        let m = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -a),
            (1, 0) => c(0.0, a),
            _ => c(0.0, 0.0),
        });
        let ev = m.hermitian_eigenvalues().unwrap();
        assert!((ev[0] + a).abs() < 1e-14);
        assert!((ev[1] - a).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_matches_eigenvalue_for_hermitian() {
        let m = CMat::from_fn(3, 3, |i, j| {
            if i == j {
                c(1.0 + i as f64, 0.0)
            } else {
                c(0.1, 0.2 * (i as f64 - j as f64))
            }
        });
        let h = m.add(&m.adjoint()).scale(c(0.5, 0.0));
        let ev = h.hermitian_eigenvalues().unwrap();
        let top = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((h.spectral_norm().unwrap() - top).abs() < 1e-12);
    }

    #[test]
    fn solve_right_inverts() {
        let a = CMat::from_fn(3, 3, |i, j| c((1 + i * j) as f64, (i as f64) - (j as f64)))
            .add_diag(c(5.0, 0.0));
        let b = CMat::from_fn(3, 3, |i, j| c(j as f64, i as f64));
        let x = a.solve_right(&b).unwrap();
        let back = x.matmul(&a);
        assert!(back.sub(&b).norm_max() < 1e-12);
    }

    #[test]
    fn skew_defect_zero_for_constructed_skew() {
        let mut m = CMat::zeros(3, 3);
        for j in 0..3 {
            for i in 0..j {
                let v = c(0.3 * (i + j) as f64, 0.1 + i as f64);
                m[(i, j)] = v;
                m[(j, i)] = -v.conj();
            }
        }
        assert_eq!(m.skew_hermitian_defect(), 0.0);
    }
}
