use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_j, hankel1};

/// Least-squares line through `(x, log₁₀ y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Slope in decades per unit of `x`.
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Smallest and largest `x` used.
    pub window: (f64, f64),
    pub samples: usize,
}

const MIN_SAMPLES: usize = 4;

/// Fits `log₁₀ error = intercept + rate · x`.
pub fn fit_decay(samples: &[(f64, f64)]) -> Result<DecayFit> {
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(x, e)| x.is_finite() && e.is_finite() && *e > 0.0)
        .map(|&(x, e)| (x, e.log10()))
        .collect();
    if usable.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: usable.len(),
        });
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all samples share one abscissa".into()));
    }
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let ss_tot: f64 = usable.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = usable.iter().map(|p| (p.1 - intercept - rate * p.0).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    let lo = usable.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = usable.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(DecayFit {
        rate,
        intercept,
        r_squared,
        window: (lo, hi),
        samples: usable.len(),
    })
}

/// Drops samples below the regularisation floor `100 α ‖f‖`.
pub fn above_floor(samples: &[(f64, f64)], alpha: f64, data_norm: f64) -> Vec<(f64, f64)> {
    let floor = 100.0 * alpha * data_norm;
    samples.iter().copied().filter(|&(_, e)| e >= floor).collect()
}

/// Continuation radius estimated from the decay of Fourier coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoEstimate {
    pub fit: DecayFit,
    pub rho: f64,
}

/// Coefficients below this fraction of the largest one are treated as noise.
pub const COEFFICIENT_FLOOR: f64 = 1e-14;

/// Fits `|f̂_m| ∼ C ρ^{−|m|}` over `|m| ∈ [count/8, count/4]` for samples of a
/// function on the unit circle at angles `2πj/count`.
pub fn estimate_rho(samples: &[Complex64]) -> Result<RhoEstimate> {
    let count = samples.len();
    if count < 64 || !count.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "sample count must be a power of two ≥ 64, got {count}"
        )));
    }
    if samples.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("boundary samples"));
    }
    let mut spectrum = samples.to_vec();
    FftPlanner::new().plan_fft_forward(count).process(&mut spectrum);
    let mags: Vec<f64> = spectrum.iter().map(|z| z.norm() / count as f64).collect();
    let peak = mags.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::DecayTooFast { threshold: COEFFICIENT_FLOOR });
    }
    let cut = COEFFICIENT_FLOOR * peak;
    let mut points = Vec::new();
    for m in count / 8..=count / 4 {
        for idx in [m, count - m] {
            if mags[idx] > cut {
                points.push((m as f64, mags[idx]));
            }
        }
    }
    if points.len() < MIN_SAMPLES {
        return Err(Error::DecayTooFast { threshold: COEFFICIENT_FLOOR });
    }
    let fit = fit_decay(&points)?;
    let rho = 10f64.powf(-fit.rate);
    Ok(RhoEstimate { fit, rho })
}

/// `(πi/2) H^{(1)}_{|m|}(kρ) J_{|m|}(kr)`.
pub fn spectral_s(m: i32, k: f64, rho: f64, r: f64) -> Result<Complex64> {
    if !(k > 0.0) || !(rho > 1.0) || !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need k > 0, rho > 1, r in (0, 1] (got {k}, {rho}, {r})"
        )));
    }
    let order = m.unsigned_abs();
    let h = hankel1(order, k * rho)?;
    let j = bessel_j(order, k * r)?;
    Ok(Complex64::new(0.0, FRAC_PI_2) * h * j)
}
