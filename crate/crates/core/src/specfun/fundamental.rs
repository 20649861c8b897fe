use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::hankel1_0;
use crate::error::{Error, Result};
use crate::point::{Point2, Point3};

/// Location of a fundamental-solution source.
pub type SourcePoint = Point2;

/// 2D Helmholtz fundamental solution `(i/4) H^(1)_0(k |src − pt|)`.
pub fn phi_2d(src: SourcePoint, pt: Point2, k: f64) -> Result<Complex64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "wavenumber must be positive and finite, got {k}"
        )));
    }
    let r = src.distance(pt);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    if !r.is_finite() {
        return Err(Error::NonFinite("phi_2d point coordinates"));
    }
    Ok(phi_2d_unchecked(r, k))
}

/// `(i/4) H_0(k r)` for `r > 0`, `k > 0` already validated.
#[inline]
pub(crate) fn phi_2d_unchecked(r: f64, k: f64) -> Complex64 {
    let h = hankel1_0(k * r);
    // (i/4)(J + iY) = (-Y + iJ)/4
    Complex64::new(-0.25 * h.im, 0.25 * h.re)
}

/// 3D Helmholtz fundamental solution `exp(ik r) / (4π r)`.
pub fn phi_3d(src: Point3, pt: Point3, k: f64) -> Result<Complex64> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "wavenumber must be non-negative and finite, got {k}"
        )));
    }
    let r = src.distance(pt);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let (s, c) = (k * r).sin_cos();
    Ok(Complex64::new(c, s) / (4.0 * PI * r))
}
