use num_complex::Complex64;

use super::cholesky::Cholesky;
use super::matrix::ComplexMatrix;
use super::qr::{least_squares, HouseholderQr};
use super::vector::ComplexVector;
use crate::error::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "regularization must be positive and finite, got {alpha}"
        )));
    }
    Ok(())
}

/// Minimiser of `‖aV − b‖² + α‖a‖²`, i.e. `a = b V^H (V V^H + αI)^{-1}`.
///
/// Always factors the `N×N` Gram matrix `VV^H`.
pub fn tikhonov_dual(v: &ComplexMatrix, b: &ComplexVector, alpha: f64) -> Result<ComplexVector> {
    check_alpha(alpha)?;
    if b.len() != v.cols() {
        return Err(Error::DimensionMismatch(format!(
            "b has length {}, V has {} columns",
            b.len(),
            v.cols()
        )));
    }
    let gram = v.gram_rows().shift_diagonal(alpha)?;
    // a^H = G^{-1} V b^H
    let mut y = v.mul_vec(&b.conj())?.into_vec();
    Cholesky::factor(&gram)?.solve_in_place(&mut y);
    ComplexVector::new(y.into_iter().map(|z| z.conj()).collect())
}

/// Minimiser of `‖f − Vc‖² + α‖c‖²`, i.e. `c = (V^H V + αI)^{-1} V^H f`.
///
/// Solved as the stacked least-squares problem `[V; √α I] c ≈ [f; 0]` by
/// Householder QR, so no Gram matrix is formed.
pub fn tikhonov_primal(v: &ComplexMatrix, f: &ComplexVector, alpha: f64) -> Result<ComplexVector> {
    check_alpha(alpha)?;
    let (n, m) = v.shape();
    if f.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "f has length {}, V has {n} rows",
            f.len()
        )));
    }
    let root = alpha.sqrt();
    let mut stacked = v.as_slice().to_vec();
    stacked.resize((n + m) * m, Complex64::new(0.0, 0.0));
    for i in 0..m {
        stacked[(n + i) * m + i] = Complex64::new(root, 0.0);
    }
    let stacked = ComplexMatrix::new(n + m, m, stacked)?;
    let mut rhs = f.as_slice().to_vec();
    rhs.resize(n + m, Complex64::new(0.0, 0.0));
    ComplexVector::new(least_squares(&stacked, &rhs)?)
}

/// `W = V^H (V V^H + αI)^{-1}`, an `M×N` matrix with `tikhonov_dual(V, b, α) = b·W`.
///
/// With the thin QR factorisation `[V^H; √α I_N] = [Q_t; Q_b] R` one has
/// `R^H R = V V^H + αI` and `Q_b = √α R^{-1}`, so `W = Q_t Q_b^H / √α`.
/// The Gram matrix is never formed.
pub fn learn_operator_matrix(v: &ComplexMatrix, alpha: f64) -> Result<ComplexMatrix> {
    check_alpha(alpha)?;
    let (n, m) = v.shape();
    let root = alpha.sqrt();
    let mut stacked = v.conj_transpose().into_vec();
    stacked.resize((m + n) * n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        stacked[(m + i) * n + i] = Complex64::new(root, 0.0);
    }
    let q = HouseholderQr::factor(&ComplexMatrix::new(m + n, n, stacked)?)?
        .thin_q()?
        .into_vec();
    let (top, bottom) = q.split_at(m * n);
    let top = ComplexMatrix::new(m, n, top.to_vec())?;
    let bottom = ComplexMatrix::new(n, n, bottom.to_vec())?;
    Ok(top.matmul(&bottom.conj_transpose())?.scale(Complex64::new(1.0 / root, 0.0)))
}

/// Tikhonov objective `‖aV − b‖² + α‖a‖²`.
pub fn dual_objective(v: &ComplexMatrix, b: &ComplexVector, alpha: f64, a: &ComplexVector) -> Result<f64> {
    let av = v.vec_mul(a)?;
    Ok(av.sub(b)?.norm_sqr() + alpha * a.norm_sqr())
}

/// Tikhonov objective `‖f − Vc‖² + α‖c‖²`.
pub fn primal_objective(v: &ComplexMatrix, f: &ComplexVector, alpha: f64, c: &ComplexVector) -> Result<f64> {
    let vc = v.mul_vec(c)?;
    Ok(vc.sub(f)?.norm_sqr() + alpha * c.norm_sqr())
}
