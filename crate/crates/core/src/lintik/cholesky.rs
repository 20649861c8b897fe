use num_complex::Complex64;
use rayon::prelude::*;

use super::matrix::ComplexMatrix;
use super::vector::{dot, dot_conj};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;

/// Lower-triangular factor `L` with `A = L·L^H`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    // row-major lower factor and its conjugate transpose
    lower: Vec<Complex64>,
    upper: Vec<Complex64>,
}

impl Cholesky {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        let (n, cols) = a.shape();
        if n != cols {
            return Err(Error::DimensionMismatch(format!("Cholesky of a {n}x{cols} matrix")));
        }
        let scale = a.max_abs();
        let defect = a.hermitian_defect();
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                asymmetry: defect / scale.max(f64::MIN_POSITIVE),
            });
        }

        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let (head, tail) = l.split_at_mut((j + 1) * n);
            let row_j = &mut head[j * n..];
            let pivot = a[(j, j)].re - row_j[..j].iter().map(|z| z.norm_sqr()).sum::<f64>();
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(Error::NotPositiveDefinite { row: j, pivot });
            }
            let d = pivot.sqrt();
            row_j[j] = Complex64::new(d, 0.0);
            let row_j = &*row_j;
            tail.par_chunks_mut(n).enumerate().for_each(|(off, row_i)| {
                let i = j + 1 + off;
                let s = a[(i, j)] - dot_conj(&row_i[..j], &row_j[..j]);
                row_i[j] = s / d;
            });
        }

        let mut upper = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..=i {
                upper[j * n + i] = l[i * n + j].conj();
            }
        }
        Ok(Self { n, lower: l, upper })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec_unchecked(self.n, self.n, self.lower.clone())
    }

    /// Solves `A·x = b` in place.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for i in 0..n {
            let s = b[i] - dot(&self.lower[i * n..i * n + i], &b[..i]);
            b[i] = s / self.lower[i * n + i].re;
        }
        for i in (0..n).rev() {
            let s = b[i] - dot(&self.upper[i * n + i + 1..(i + 1) * n], &b[i + 1..]);
            b[i] = s / self.upper[i * n + i].re;
        }
    }

    /// Solves `A·X = B` column by column.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if b.rows() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, system has {}",
                b.rows(),
                self.n
            )));
        }
        // columns of B become contiguous rows
        let mut cols = b.conj_transpose().into_vec();
        for z in cols.iter_mut() {
            *z = z.conj();
        }
        cols.par_chunks_mut(self.n).for_each(|col| self.solve_in_place(col));
        let mut out = vec![Complex64::new(0.0, 0.0); cols.len()];
        let k = b.cols();
        for (j, col) in cols.chunks(self.n).enumerate() {
            for (i, v) in col.iter().enumerate() {
                out[i * k + j] = *v;
            }
        }
        ComplexMatrix::new(self.n, k, out)
    }
}

/// Solves `A·X = B` for Hermitian positive definite `A` by Cholesky.
pub fn hermitian_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with {}-row right-hand side",
            a.rows(),
            a.cols(),
            b.rows()
        )));
    }
    Cholesky::factor(a)?.solve(b)
}
