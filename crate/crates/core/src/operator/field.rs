use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, PointSet};
use crate::lintik::ComplexVector;
use crate::point::Point2;
use crate::specfun::phi_2d;

/// Closed-form solutions of `Δu + k²u = 0` used as reference fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExactField {
    /// `sin(k x/√2) sin(k y/√2)`.
    PlaneProduct { k: f64 },
    /// `Φ(x̂, x)`.
    PointSource { source: Point2, k: f64 },
    /// `Φ(x̂₁, x) − Φ(x̂₂, x)`.
    Dipole { plus: Point2, minus: Point2, k: f64 },
    /// `exp(i k (cos θ, sin θ)·x)`.
    PlaneWave { angle: f64, k: f64 },
    /// Identically zero.
    Zero,
}

impl ExactField {
    pub fn wavenumber(&self) -> Option<f64> {
        match *self {
            ExactField::PlaneProduct { k }
            | ExactField::PointSource { k, .. }
            | ExactField::Dipole { k, .. }
            | ExactField::PlaneWave { k, .. } => Some(k),
            ExactField::Zero => None,
        }
    }

    /// Points where the field is singular.
    pub fn singular_points(&self) -> Vec<Point2> {
        match *self {
            ExactField::PointSource { source, .. } => vec![source],
            ExactField::Dipole { plus, minus, .. } => vec![plus, minus],
            _ => Vec::new(),
        }
    }

    pub fn eval(&self, p: Point2) -> Result<Complex64> {
        match *self {
            ExactField::PlaneProduct { k } => {
                let s = k * FRAC_1_SQRT_2;
                Ok(Complex64::new((s * p.x).sin() * (s * p.y).sin(), 0.0))
            }
            ExactField::PointSource { source, k } => phi_2d(source, p, k),
            ExactField::Dipole { plus, minus, k } => Ok(phi_2d(plus, p, k)? - phi_2d(minus, p, k)?),
            ExactField::PlaneWave { angle, k } => {
                let phase = k * (angle.cos() * p.x + angle.sin() * p.y);
                Ok(Complex64::from_polar(1.0, phase))
            }
            ExactField::Zero => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn eval_all(&self, points: &[Point2]) -> Result<ComplexVector> {
        ComplexVector::new(points.iter().map(|&p| self.eval(p)).collect::<Result<_>>()?)
    }

    /// Rejects fields whose singular points lie on `curve`.
    pub fn check_boundary(&self, curve: &BoundaryCurve) -> Result<()> {
        for s in self.singular_points() {
            let rho = curve.radius_towards(s);
            if (s.norm() - rho).abs() <= 1e-12 * rho {
                return Err(Error::SingularOnBoundary { x: s.x, y: s.y });
            }
        }
        Ok(())
    }
}

/// `f_j = u(x_j)` at the collocation points.
pub fn boundary_trace(field: &ExactField, collocation: &PointSet) -> Result<ComplexVector> {
    let values = collocation
        .points()
        .iter()
        .map(|&p| match field.eval(p) {
            Err(Error::CoincidentPoints) => Err(Error::SingularOnBoundary { x: p.x, y: p.y }),
            other => other,
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexVector::new(values)
}
