use num_complex::Complex64;
use rayon::prelude::*;

use super::matrix::ComplexMatrix;
use super::vector::{dot_conj, norm2};
use crate::error::{Error, Result};

/// Householder QR of a tall matrix with the reflectors kept in place.
pub(crate) struct HouseholderQr {
    rows: usize,
    // column-major; entries at and below the diagonal hold the unit reflector,
    // entries above it hold R
    cols: Vec<Vec<Complex64>>,
    diag: Vec<Complex64>,
}

impl HouseholderQr {
    /// Factors `A` (`p×n`, `p ≥ n`, full column rank).
    pub(crate) fn factor(a: &ComplexMatrix) -> Result<Self> {
        let (p, n) = a.shape();
        if p < n {
            return Err(Error::DimensionMismatch(format!("QR needs a tall matrix, got {p}x{n}")));
        }
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..p).map(|i| a[(i, j)]).collect()).collect();
        let mut diag = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let (done, rest) = cols.split_at_mut(j + 1);
            let col = &mut done[j][j..];
            let norm = norm2(col);
            if norm == 0.0 {
                return Err(Error::NotPositiveDefinite { row: j, pivot: 0.0 });
            }
            let phase = if col[0].norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                col[0] / col[0].norm()
            };
            let beta = -phase * norm;
            col[0] -= beta;
            let vnorm = norm2(col);
            for z in col.iter_mut() {
                *z /= vnorm;
            }
            diag[j] = beta;
            let v = &*col;
            rest.par_iter_mut().for_each(|other| reflect(v, &mut other[j..]));
        }
        Ok(Self { rows: p, cols, diag })
    }

    /// `b ← Q^H b`.
    pub(crate) fn apply_qh(&self, b: &mut [Complex64]) {
        for (j, col) in self.cols.iter().enumerate() {
            reflect(&col[j..], &mut b[j..]);
        }
    }

    /// Solves `R x = y` with the leading `n` entries of `y`.
    pub(crate) fn back_substitute(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.cols.len();
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for (k, xk) in x.iter().enumerate().skip(i + 1) {
                s -= self.cols[k][i] * xk;
            }
            x[i] = s / self.diag[i];
        }
        x
    }

    /// The first `n` columns of `Q`, a `p×n` matrix with orthonormal columns.
    pub(crate) fn thin_q(&self) -> Result<ComplexMatrix> {
        let (p, n) = (self.rows, self.cols.len());
        let columns: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut x = vec![Complex64::new(0.0, 0.0); p];
                x[j] = Complex64::new(1.0, 0.0);
                // reflectors past j act on rows where x is still zero
                for r in (0..=j).rev() {
                    reflect(&self.cols[r][r..], &mut x[r..]);
                }
                x
            })
            .collect();
        let mut data = vec![Complex64::new(0.0, 0.0); p * n];
        for (j, col) in columns.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                data[i * n + j] = *z;
            }
        }
        ComplexMatrix::new(p, n, data)
    }
}

/// Least-squares solution of `A·x ≈ b` (`A` tall, full column rank) by
/// Householder QR.
pub(crate) fn least_squares(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let qr = HouseholderQr::factor(a)?;
    let mut rhs = b.to_vec();
    qr.apply_qh(&mut rhs);
    Ok(qr.back_substitute(&rhs))
}

/// `y ← (I − 2vv^H) y` for unit `v`.
fn reflect(v: &[Complex64], y: &mut [Complex64]) {
    let s = dot_conj(y, v) * 2.0;
    for (yi, vi) in y.iter_mut().zip(v) {
        *yi -= vi * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_system() {
        let a = ComplexMatrix::new(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 2.0)]).unwrap();
        let x_true = [c(0.5, -1.0), c(2.0, 0.25)];
        let b = a.mul_vec(&x_true).unwrap();
        let x = least_squares(&a, &b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn averaging_column() {
        let a = ComplexMatrix::new(3, 1, vec![c(1.0, 0.0); 3]).unwrap();
        let x = least_squares(&a, &[c(1.0, 0.0), c(2.0, 0.0), c(6.0, 3.0)]).unwrap();
        assert!((x[0] - c(3.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn thin_q_is_orthonormal_and_reproduces_a() {
        let a = ComplexMatrix::from_fn(7, 3, |i, j| Ok(c((i * 3 + j) as f64 * 0.37 - 1.0, (i as f64 - j as f64).sin()))).unwrap();
        let qr = HouseholderQr::factor(&a).unwrap();
        let q = qr.thin_q().unwrap();
        let gram = q.conj_transpose().matmul(&q).unwrap();
        assert!(gram.sub(&ComplexMatrix::identity(3)).unwrap().max_abs() < 1e-14);
        // A = Q R
        let mut r = vec![c(0.0, 0.0); 9];
        for j in 0..3 {
            for i in 0..j {
                r[i * 3 + j] = qr.cols[j][i];
            }
            r[j * 3 + j] = qr.diag[j];
        }
        let qr_product = q.matmul(&ComplexMatrix::new(3, 3, r).unwrap()).unwrap();
        assert!(qr_product.sub(&a).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn rejects_wide() {
        let a = ComplexMatrix::new(1, 2, vec![c(1.0, 0.0); 2]).unwrap();
        assert!(least_squares(&a, &[c(1.0, 0.0)]).is_err());
    }
}
