use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::point::Point2;

/// Star-shaped closed curve `γ(t) = ρ(t)(cos t, sin t)`, `t ∈ [0, 2π)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryCurve {
    Circle {
        radius: f64,
    },
    /// `ρ(t) = a − b cos(n t)`.
    Flower {
        a: f64,
        b: f64,
        n: u32,
    },
    /// `ρ(t) = mean + Σ cos[j−1] cos(j t) + sin[j−1] sin(j t)`.
    Radial {
        mean: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

const PROFILE_SAMPLES: usize = 4096;

impl BoundaryCurve {
    pub fn circle(radius: f64) -> Result<Self> {
        let c = BoundaryCurve::Circle { radius };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BoundaryCurve::Circle { radius } => {
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidCurve(format!(
                        "circle radius must be positive, got {radius}"
                    )));
                }
            }
            BoundaryCurve::Flower { a, b, n } => {
                if !(a.is_finite() && b.is_finite()) || !(b >= 0.0) || !(a > b) {
                    return Err(Error::InvalidCurve(format!(
                        "flower needs a > b >= 0 (got a={a}, b={b}); otherwise the radius vanishes"
                    )));
                }
                if n == 0 {
                    return Err(Error::InvalidCurve("flower petal count must be positive".into()));
                }
            }
            BoundaryCurve::Radial { mean, ref cos, ref sin } => {
                if !mean.is_finite() || cos.iter().chain(sin).any(|c| !c.is_finite()) {
                    return Err(Error::InvalidCurve("non-finite radial coefficient".into()));
                }
                let min = self.sampled_extremes().0;
                if !(min > 0.0) {
                    return Err(Error::InvalidCurve(format!(
                        "radial profile is not positive (min {min})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Radius `ρ(t)`.
    pub fn radius(&self, t: f64) -> f64 {
        match *self {
            BoundaryCurve::Circle { radius } => radius,
            BoundaryCurve::Flower { a, b, n } => a - b * (n as f64 * t).cos(),
            BoundaryCurve::Radial { mean, ref cos, ref sin } => {
                let mut r = mean;
                for (j, c) in cos.iter().enumerate() {
                    r += c * ((j + 1) as f64 * t).cos();
                }
                for (j, s) in sin.iter().enumerate() {
                    r += s * ((j + 1) as f64 * t).sin();
                }
                r
            }
        }
    }

    /// `ρ'(t)`.
    pub fn radius_derivative(&self, t: f64) -> f64 {
        match *self {
            BoundaryCurve::Circle { .. } => 0.0,
            BoundaryCurve::Flower { b, n, .. } => {
                let nf = n as f64;
                b * nf * (nf * t).sin()
            }
            BoundaryCurve::Radial { ref cos, ref sin, .. } => {
                let mut d = 0.0;
                for (j, c) in cos.iter().enumerate() {
                    let jf = (j + 1) as f64;
                    d -= c * jf * (jf * t).sin();
                }
                for (j, s) in sin.iter().enumerate() {
                    let jf = (j + 1) as f64;
                    d += s * jf * (jf * t).cos();
                }
                d
            }
        }
    }

    pub fn point(&self, t: f64) -> Point2 {
        Point2::polar(self.radius(t), t)
    }

    /// `|γ'(t)| = sqrt(ρ² + ρ'²)`.
    pub fn speed(&self, t: f64) -> f64 {
        self.radius(t).hypot(self.radius_derivative(t))
    }

    /// Arc length of the parameter interval `[t0, t1]`.
    pub fn arc_length_between(&self, t0: f64, t1: f64) -> f64 {
        gauss_legendre(|t| self.speed(t), t0, t1)
    }

    /// Total length, from 64 Gauss–Legendre panels.
    pub fn arc_length(&self) -> f64 {
        let panels = 64;
        let h = TAU / panels as f64;
        (0..panels)
            .map(|i| self.arc_length_between(i as f64 * h, (i + 1) as f64 * h))
            .sum()
    }

    /// Largest distance from the origin to the curve.
    pub fn max_radius(&self) -> f64 {
        match *self {
            BoundaryCurve::Circle { radius } => radius,
            BoundaryCurve::Flower { a, b, .. } => a + b,
            BoundaryCurve::Radial { .. } => self.sampled_extremes().1,
        }
    }

    pub fn min_radius(&self) -> f64 {
        match *self {
            BoundaryCurve::Circle { radius } => radius,
            BoundaryCurve::Flower { a, b, .. } => a - b,
            BoundaryCurve::Radial { .. } => self.sampled_extremes().0,
        }
    }

    /// Enclosed area `½∫ρ² dt`.
    pub fn area(&self) -> f64 {
        match *self {
            BoundaryCurve::Circle { radius } => PI * radius * radius,
            BoundaryCurve::Flower { a, b, .. } => PI * (a * a + 0.5 * b * b),
            BoundaryCurve::Radial { mean, ref cos, ref sin } => {
                PI * (mean * mean + 0.5 * cos.iter().chain(sin).map(|c| c * c).sum::<f64>())
            }
        }
    }

    /// Radius of the curve in the direction of `p`.
    pub fn radius_towards(&self, p: Point2) -> f64 {
        self.radius(p.angle())
    }

    /// Strict inside test against the shrunken curve `(1 − margin) ρ(θ)`.
    pub fn contains(&self, p: Point2, margin: f64) -> bool {
        p.norm() < (1.0 - margin) * self.radius_towards(p)
    }

    fn sampled_extremes(&self) -> (f64, f64) {
        (0..PROFILE_SAMPLES)
            .map(|i| self.radius(TAU * i as f64 / PROFILE_SAMPLES as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r), hi.max(r))
            })
    }
}

/// The flower-shaped curve `ρ(t) = a − b cos(n t)`.
pub fn flower_curve(a: f64, b: f64, n: u32) -> Result<BoundaryCurve> {
    let c = BoundaryCurve::Flower { a, b, n };
    c.validate()?;
    Ok(c)
}
