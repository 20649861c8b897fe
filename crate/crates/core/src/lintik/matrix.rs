use std::ops::Index;

use num_complex::Complex64;
use rayon::prelude::*;

use super::vector::{dot, dot_conj, norm2, ComplexVector, COMPENSATE_FROM};
use crate::error::{Error, Result};

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds the matrix entry by entry, rows in parallel.
    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<Complex64> + Sync,
    {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty {rows}x{cols} matrix")));
        }
        let mut data = vec![ZERO; rows * cols];
        data.par_chunks_mut(cols).enumerate().try_for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = f(i, j)?;
            }
            Ok::<_, Error>(())
        })?;
        Self::new(rows, cols, data)
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(*d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec_unchecked((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = vec![ZERO; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        Self::from_vec_unchecked(self.cols, self.rows, out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(shape_mismatch("subtract", self, other));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_vec_unchecked(self.rows, self.cols, data))
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `A + shift·I` for square `A`.
    pub fn shift_diagonal(&self, shift: f64) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "diagonal shift of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.data[i * self.cols + i].re += shift;
        }
        Ok(out)
    }

    /// Largest `|a_ij − conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.rows.min(self.cols);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `A·x`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Result<ComplexVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let out = (0..self.rows).into_par_iter().map(|i| dot(self.row(i), x)).collect();
        Ok(ComplexVector::from_vec_unchecked(out))
    }

    /// Row vector times matrix, `b·A`.
    pub fn vec_mul(&self, b: &[Complex64]) -> Result<ComplexVector> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                b.len(),
                self.rows,
                self.cols
            )));
        }
        if self.rows >= COMPENSATE_FROM {
            let t = self.transpose();
            return t.mul_vec(b);
        }
        let mut out = vec![ZERO; self.cols];
        for (bi, row) in b.iter().zip(self.data.chunks(self.cols)) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += bi * a;
            }
        }
        Ok(ComplexVector::from_vec_unchecked(out))
    }

    fn transpose(&self) -> Self {
        let mut out = vec![ZERO; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        Self::from_vec_unchecked(self.cols, self.rows, out)
    }

    /// `A·B`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(shape_mismatch("multiply", self, other));
        }
        let (m, n) = (self.rows, other.cols);
        let inner = self.cols;
        let mut out = vec![ZERO; m * n];
        if inner >= COMPENSATE_FROM {
            let bt = other.transpose();
            out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = dot(self.row(i), bt.row(j));
                }
            });
            return Ok(Self::from_vec_unchecked(m, n, out));
        }
        let b_re: Vec<f64> = other.data.iter().map(|z| z.re).collect();
        let b_im: Vec<f64> = other.data.iter().map(|z| z.im).collect();
        out.par_chunks_mut(n * ROW_BLOCK)
            .enumerate()
            .for_each(|(blk, chunk)| {
                let first = blk * ROW_BLOCK;
                let count = chunk.len() / n;
                let a_rows: Vec<&[Complex64]> = (first..first + count).map(|i| self.row(i)).collect();
                multiply_block(&a_rows, &b_re, &b_im, n, chunk);
            });
        Ok(Self::from_vec_unchecked(m, n, out))
    }

    /// `A·A^H`, exactly Hermitian with a real diagonal.
    pub fn gram_rows(&self) -> Self {
        let n = self.rows;
        let mut lower = vec![ZERO; n * n];
        lower.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate().take(i + 1) {
                *slot = dot_conj(self.row(i), self.row(j));
            }
        });
        for i in 0..n {
            lower[i * n + i].im = 0.0;
            for j in 0..i {
                lower[j * n + i] = lower[i * n + j].conj();
            }
        }
        Self::from_vec_unchecked(n, n, lower)
    }

    /// `A^H·A`.
    pub fn gram_cols(&self) -> Self {
        self.conj_transpose().gram_rows()
    }

    pub(crate) fn into_vec(self) -> Vec<Complex64> {
        self.data
    }
}

const ROW_BLOCK: usize = 4;

/// Accumulates `a_rows · B` into `out` (row-major, `n` columns) with split
/// real/imaginary panels of `B`.
fn multiply_block(a_rows: &[&[Complex64]], b_re: &[f64], b_im: &[f64], n: usize, out: &mut [Complex64]) {
    let r = a_rows.len();
    let mut acc_re = vec![0.0; r * n];
    let mut acc_im = vec![0.0; r * n];
    let inner = a_rows[0].len();
    for k in 0..inner {
        let br = &b_re[k * n..(k + 1) * n];
        let bi = &b_im[k * n..(k + 1) * n];
        for (row, a) in a_rows.iter().enumerate() {
            let a = a[k];
            let cr = &mut acc_re[row * n..(row + 1) * n];
            let ci = &mut acc_im[row * n..(row + 1) * n];
            for j in 0..n {
                cr[j] += a.re * br[j] - a.im * bi[j];
                ci[j] += a.re * bi[j] + a.im * br[j];
            }
        }
    }
    for (o, (re, im)) in out.iter_mut().zip(acc_re.iter().zip(&acc_im)) {
        *o = Complex64::new(*re, *im);
    }
}

fn shape_mismatch(op: &str, a: &ComplexMatrix, b: &ComplexMatrix) -> Error {
    Error::DimensionMismatch(format!(
        "cannot {op} {}x{} and {}x{}",
        a.rows, a.cols, b.rows, b.cols
    ))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}
