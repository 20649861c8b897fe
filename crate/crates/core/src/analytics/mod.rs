//! Error norms, decay-rate fits, and the Fourier-decay estimate of how far
//! boundary data continues analytically.

mod decay;
mod report;

pub use decay::{
    above_floor, estimate_rho, fit_decay, spectral_s, DecayFit, RhoEstimate, COEFFICIENT_FLOOR,
};
pub use report::{error_report, weighted_l2, ErrorReport, Timings};
