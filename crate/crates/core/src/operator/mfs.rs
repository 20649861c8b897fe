use num_complex::Complex64;
use rayon::prelude::*;

use super::learned::assemble_training_matrix;
use super::problem::WaveProblem;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::lintik::{dot, tikhonov_primal, ComplexVector};
use crate::specfun::phi_2d_unchecked;

/// Source strengths `μ = (V^H V + αI)^{-1} V^H f` of the classical method of
/// fundamental solutions.
pub fn mfs_direct_fit(problem: &WaveProblem, f: &ComplexVector) -> Result<ComplexVector> {
    let v = assemble_training_matrix(problem)?;
    tikhonov_primal(&v, f, problem.alpha)
}

/// `u^{(μ)}(x) = Σ μ_i Φ(x̂_i, x)` at each point.
pub fn mfs_evaluate(
    sources: &PointSet,
    mu: &ComplexVector,
    k: f64,
    points: &PointSet,
) -> Result<ComplexVector> {
    if mu.len() != sources.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} sources",
            mu.len(),
            sources.len()
        )));
    }
    let src = sources.points();
    let values = points
        .points()
        .par_iter()
        .map(|&x| {
            let row = src
                .iter()
                .map(|s| {
                    let r = s.distance(x);
                    if r == 0.0 {
                        Err(Error::CoincidentPoints)
                    } else {
                        Ok(phi_2d_unchecked(r, k))
                    }
                })
                .collect::<Result<Vec<Complex64>>>()?;
            Ok(dot(&row, mu))
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexVector::new(values)
}
