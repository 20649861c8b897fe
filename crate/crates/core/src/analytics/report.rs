use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lintik::ComplexVector;

/// Wall-clock seconds for the two phases of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub learn_s: f64,
    pub apply_s: f64,
}

/// Norms of `numeric − exact` over a point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// Raw Euclidean norm, not divided by the point count.
    pub two_norm: f64,
    pub inf_norm: f64,
    pub rms: f64,
    pub point_count: usize,
    pub learn_seconds: f64,
    pub apply_seconds: f64,
}

pub fn error_report(exact: &ComplexVector, numeric: &ComplexVector, timings: Timings) -> Result<ErrorReport> {
    if exact.len() != numeric.len() {
        return Err(Error::DimensionMismatch(format!(
            "exact has {} values, numeric has {}",
            exact.len(),
            numeric.len()
        )));
    }
    let err = numeric.sub(exact)?;
    let two_norm = err.norm();
    let inf_norm = err.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let count = err.len();
    let rms = if count == 0 { 0.0 } else { two_norm / (count as f64).sqrt() };
    Ok(ErrorReport {
        two_norm,
        inf_norm,
        rms,
        point_count: count,
        learn_seconds: timings.learn_s,
        apply_seconds: timings.apply_s,
    })
}

/// `(Σ |Γ_j| |e_j|²)^{1/2}`, the arc-length weighted boundary norm.
pub fn weighted_l2(exact: &ComplexVector, numeric: &ComplexVector, weights: &[f64]) -> Result<f64> {
    if exact.len() != numeric.len() || weights.len() != exact.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} exact, {} numeric, {} weights",
            exact.len(),
            numeric.len(),
            weights.len()
        )));
    }
    let err = numeric.sub(exact)?;
    Ok(err.iter().zip(weights).map(|(e, w)| w * e.norm_sqr()).sum::<f64>().sqrt())
}
