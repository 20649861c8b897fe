use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{collocation_points_with, source_points, BoundaryCurve, PointSet, Spacing};

/// Smallest default regularisation; keeps `M N R^{-2M}` from underflowing.
pub const ALPHA_FLOOR: f64 = 1e-15;

/// One Dirichlet Helmholtz problem `Δu + k²u = 0` with its discretisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveProblem {
    pub k: f64,
    pub curve: BoundaryCurve,
    /// Collocation count `N`.
    pub collocation: usize,
    /// Source count `M`.
    pub sources: usize,
    /// Source circle radius `R`.
    pub source_radius: f64,
    pub alpha: f64,
    #[serde(default)]
    pub spacing: Spacing,
}

impl WaveProblem {
    pub fn new(
        k: f64,
        curve: BoundaryCurve,
        collocation: usize,
        sources: usize,
        source_radius: f64,
        alpha: f64,
    ) -> Result<Self> {
        let p = Self {
            k,
            curve,
            collocation,
            sources,
            source_radius,
            alpha,
            spacing: Spacing::EqualParameter,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same as [`WaveProblem::new`] with `α` from [`default_alpha`].
    pub fn with_default_alpha(
        k: f64,
        curve: BoundaryCurve,
        collocation: usize,
        sources: usize,
        source_radius: f64,
    ) -> Result<Self> {
        let alpha = default_alpha(sources, collocation, source_radius)?;
        Self::new(k, curve, collocation, sources, source_radius, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "wavenumber must be positive and finite, got {}",
                self.k
            )));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "regularization must be positive and finite, got {}",
                self.alpha
            )));
        }
        self.curve.validate()?;
        let reach = self.curve.max_radius();
        if !(self.source_radius > reach) || !self.source_radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "source radius {} must exceed the curve's circumscribing radius {reach}",
                self.source_radius
            )));
        }
        if self.collocation < 8 {
            return Err(Error::InvalidParameter(format!(
                "need at least 8 collocation points, got {}",
                self.collocation
            )));
        }
        if self.sources < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 sources, got {}",
                self.sources
            )));
        }
        Ok(())
    }

    pub fn collocation_points(&self) -> Result<PointSet> {
        collocation_points_with(&self.curve, self.collocation, self.spacing)
    }

    pub fn source_points(&self) -> Result<PointSet> {
        source_points(self.source_radius, self.sources)
    }
}

/// `α = max(M N R^{-2M}, 1e-15)`, evaluated in logarithms.
pub fn default_alpha(m: usize, n: usize, r: f64) -> Result<f64> {
    if m == 0 || n == 0 || !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "default alpha needs positive M, N, R (got {m}, {n}, {r})"
        )));
    }
    let log10 = ((m * n) as f64).log10() - 2.0 * m as f64 * r.log10();
    Ok(10f64.powf(log10).max(ALPHA_FLOOR))
}

/// `k = 2π f / c`.
pub fn wavenumber(frequency: f64, sound_speed: f64) -> Result<f64> {
    if !(frequency > 0.0) || !(sound_speed > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frequency and sound speed must be positive (got {frequency}, {sound_speed})"
        )));
    }
    Ok(TAU * frequency / sound_speed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::flower_curve;

    #[test]
    fn reference_wavenumber() {
        let k = wavenumber(10000.0, 340.0).unwrap();
        assert!((k - 184.799_567_858_223_1).abs() < 1e-12);
    }

    #[test]
    fn default_alpha_near_reference() {
        let a = default_alpha(288, 288, 1.07).unwrap();
        assert!(a > 5e-13 && a < 2e-12, "{a:e}");
        // large M underflows to the floor
        assert_eq!(default_alpha(4000, 4000, 2.0).unwrap(), ALPHA_FLOOR);
        assert!(default_alpha(0, 10, 2.0).is_err());
    }

    #[test]
    fn validation() {
        let flower = flower_curve(0.5, 0.1, 6).unwrap();
        assert!(WaveProblem::new(10.0, flower.clone(), 64, 64, 1.07, 1e-12).is_ok());
        // source circle must clear the petal tips at 0.6
        assert!(WaveProblem::new(10.0, flower.clone(), 64, 64, 0.55, 1e-12).is_err());
        assert!(WaveProblem::new(0.0, flower.clone(), 64, 64, 1.07, 1e-12).is_err());
        assert!(WaveProblem::new(10.0, flower.clone(), 64, 64, 1.07, 0.0).is_err());
        assert!(WaveProblem::new(10.0, flower.clone(), 4, 64, 1.07, 1e-12).is_err());
        assert!(WaveProblem::new(10.0, flower, 64, 1, 1.07, 1e-12).is_err());
    }
}
