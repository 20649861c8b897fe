use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::problem::WaveProblem;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::lintik::{dot, learn_operator_matrix, ComplexMatrix, ComplexVector};
use crate::point::Point2;
use crate::specfun::phi_2d_unchecked;

/// Wall-clock seconds spent building an operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LearnTimings {
    pub assemble_s: f64,
    pub solve_s: f64,
}

impl LearnTimings {
    pub fn total(&self) -> f64 {
        self.assemble_s + self.solve_s
    }
}

/// Matrix of `Φ(x̂_i, x_j)` with rows indexed by `points`, columns by `sources`.
pub fn fundamental_matrix(sources: &PointSet, points: &PointSet, k: f64) -> Result<ComplexMatrix> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("wavenumber must be positive, got {k}")));
    }
    let src = sources.points();
    let pts = points.points();
    ComplexMatrix::from_fn(pts.len(), src.len(), |j, i| {
        let r = src[i].distance(pts[j]);
        if r == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok(phi_2d_unchecked(r, k))
    })
}

/// `V` with `V[j][i] = Φ(x̂_i, x_j)`: rows are collocation points, columns sources.
pub fn assemble_training_matrix(problem: &WaveProblem) -> Result<ComplexMatrix> {
    problem.validate()?;
    fundamental_matrix(&problem.source_points()?, &problem.collocation_points()?, problem.k)
}

/// The learned map `W = V^H (V V^H + αI)^{-1}` with what is needed to apply it.
#[derive(Clone, Debug)]
pub struct LearnedOperator {
    w: ComplexMatrix,
    sources: PointSet,
    collocation: PointSet,
    k: f64,
    alpha: f64,
    timings: LearnTimings,
}

impl LearnedOperator {
    /// Reassembles an operator from stored parts.
    pub fn from_parts(
        w: ComplexMatrix,
        sources: PointSet,
        collocation: PointSet,
        k: f64,
        alpha: f64,
        timings: LearnTimings,
    ) -> Result<Self> {
        if w.shape() != (sources.len(), collocation.len()) {
            return Err(Error::DimensionMismatch(format!(
                "W is {}x{} but there are {} sources and {} collocation points",
                w.rows(),
                w.cols(),
                sources.len(),
                collocation.len()
            )));
        }
        if !(k > 0.0) || !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("need k > 0 and alpha > 0, got {k}, {alpha}")));
        }
        Ok(Self {
            w,
            sources,
            collocation,
            k,
            alpha,
            timings,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn sources(&self) -> &PointSet {
        &self.sources
    }

    pub fn collocation(&self) -> &PointSet {
        &self.collocation
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn timings(&self) -> LearnTimings {
        self.timings
    }

    /// `M`.
    pub fn source_count(&self) -> usize {
        self.w.rows()
    }

    /// `N`.
    pub fn collocation_count(&self) -> usize {
        self.w.cols()
    }

    fn check_query(&self, x: Point2) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFinite("query point"));
        }
        let src = self.sources.points();
        let radius = src[0].norm();
        let on_circle = src.iter().all(|s| (s.norm() - radius).abs() <= 1e-12 * radius)
            && (x.norm() - radius).abs() <= 1e-12 * radius;
        if on_circle || src.iter().any(|s| s.distance(x) == 0.0) {
            return Err(Error::QueryOnSourceCircle { x: x.x, y: x.y });
        }
        Ok(())
    }

    fn row_unchecked(&self, x: Point2) -> Vec<Complex64> {
        self.sources
            .points()
            .iter()
            .map(|s| phi_2d_unchecked(s.distance(x), self.k))
            .collect()
    }

    /// `b_x = (Φ(x̂_1, x), …, Φ(x̂_M, x))`.
    pub fn evaluate_row(&self, x: Point2) -> Result<ComplexVector> {
        self.check_query(x)?;
        ComplexVector::new(self.row_unchecked(x))
    }

    /// `W f`, the coefficient vector shared by all queries.
    pub fn coefficients(&self, f: &ComplexVector) -> Result<ComplexVector> {
        if f.len() != self.collocation_count() {
            return Err(Error::DimensionMismatch(format!(
                "boundary data has {} values, operator expects N = {}",
                f.len(),
                self.collocation_count()
            )));
        }
        self.w.mul_vec(f)
    }

    /// `u(x) = b_x W f` at every query point.
    pub fn apply(&self, f: &ComplexVector, queries: &PointSet) -> Result<ComplexVector> {
        let wf = self.coefficients(f)?;
        for &x in queries.points() {
            self.check_query(x)?;
        }
        let values: Vec<Complex64> = queries
            .points()
            .par_iter()
            .map(|&x| dot(&self.row_unchecked(x), &wf))
            .collect();
        ComplexVector::new(values)
    }

    /// Precomputes `A = B_X W` for a fixed query set, so later inputs cost one
    /// `Q×N` matrix-vector product.
    pub fn bind(&self, queries: &PointSet) -> Result<QueryOperator> {
        for &x in queries.points() {
            self.check_query(x)?;
        }
        let start = Instant::now();
        let b = fundamental_matrix(&self.sources, queries, self.k)?;
        let rows_s = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let a = b.matmul(&self.w)?;
        let product_s = start.elapsed().as_secs_f64();
        Ok(QueryOperator {
            a,
            queries: queries.clone(),
            timings: BindTimings { rows_s, product_s },
        })
    }
}

/// Learns `W` for `problem`, timing assembly and factorisation separately.
pub fn learn(problem: &WaveProblem) -> Result<LearnedOperator> {
    problem.validate()?;
    let start = Instant::now();
    let sources = problem.source_points()?;
    let collocation = problem.collocation_points()?;
    let v = fundamental_matrix(&sources, &collocation, problem.k)?;
    let assemble_s = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let w = learn_operator_matrix(&v, problem.alpha)?;
    let solve_s = start.elapsed().as_secs_f64();
    LearnedOperator::from_parts(
        w,
        sources,
        collocation,
        problem.k,
        problem.alpha,
        LearnTimings { assemble_s, solve_s },
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BindTimings {
    pub rows_s: f64,
    pub product_s: f64,
}

impl BindTimings {
    pub fn total(&self) -> f64 {
        self.rows_s + self.product_s
    }
}

/// `A = B_X W`, the boundary-to-field map restricted to a fixed query set.
#[derive(Clone, Debug)]
pub struct QueryOperator {
    a: ComplexMatrix,
    queries: PointSet,
    timings: BindTimings,
}

impl QueryOperator {
    pub fn from_parts(a: ComplexMatrix, queries: PointSet, timings: BindTimings) -> Result<Self> {
        if a.rows() != queries.len() {
            return Err(Error::DimensionMismatch(format!(
                "A has {} rows for {} query points",
                a.rows(),
                queries.len()
            )));
        }
        Ok(Self { a, queries, timings })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn queries(&self) -> &PointSet {
        &self.queries
    }

    pub fn timings(&self) -> BindTimings {
        self.timings
    }

    pub fn apply(&self, f: &ComplexVector) -> Result<ComplexVector> {
        if f.len() != self.a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "boundary data has {} values, operator expects N = {}",
                f.len(),
                self.a.cols()
            )));
        }
        self.a.mul_vec(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{collocation_points, source_points, BoundaryCurve, PointRole};

    fn toy(alpha: f64) -> (LearnedOperator, Complex64) {
        let sources = PointSet::new(PointRole::Source, vec![Point2::new(1.0, 0.0)]).unwrap();
        let coll = PointSet::new(PointRole::Collocation, vec![Point2::new(0.0, 0.0)]).unwrap();
        let v = fundamental_matrix(&sources, &coll, 1.0).unwrap();
        let w = learn_operator_matrix(&v, alpha).unwrap();
        let op = LearnedOperator::from_parts(w, sources, coll, 1.0, alpha, LearnTimings::default()).unwrap();
        (op, v[(0, 0)])
    }

    #[test]
    fn scalar_toy() {
        let (op, phi) = toy(1.0);
        assert!((phi - Complex64::new(-0.02206424105, 0.19129942164)).norm() < 1e-10);
        let expect = phi.conj() / (phi.norm_sqr() + 1.0);
        let got = op.matrix()[(0, 0)];
        assert!((got - expect).norm() < 16.0 * f64::EPSILON * expect.norm());
        let row = op.evaluate_row(Point2::new(0.0, 0.0)).unwrap();
        assert_eq!(row[0], phi);
    }

    #[test]
    fn circulant_on_concentric_circles() {
        let n = 16;
        let coll = collocation_points(&BoundaryCurve::circle(1.0).unwrap(), n).unwrap();
        let src = source_points(1.5, n).unwrap();
        let v = fundamental_matrix(&src, &coll, 3.0).unwrap();
        for j in 0..n {
            for i in 0..n {
                let d = (j + n - i) % n;
                assert!((v[(j, i)] - v[(d, 0)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_queries_on_source_circle() {
        let problem = WaveProblem::new(3.0, BoundaryCurve::circle(1.0).unwrap(), 16, 16, 2.0, 1e-10).unwrap();
        let op = learn(&problem).unwrap();
        assert!(matches!(
            op.evaluate_row(Point2::polar(2.0, 0.1)),
            Err(Error::QueryOnSourceCircle { .. })
        ));
        assert!(op.evaluate_row(Point2::new(0.2, 0.3)).is_ok());
    }

    #[test]
    fn bound_operator_matches_apply() {
        let problem = WaveProblem::new(4.0, BoundaryCurve::circle(1.0).unwrap(), 24, 20, 1.8, 1e-10).unwrap();
        let op = learn(&problem).unwrap();
        let queries = PointSet::new(
            PointRole::Query,
            (0..7).map(|i| Point2::polar(0.1 * i as f64, 0.7 * i as f64)).collect(),
        )
        .unwrap();
        let f = ComplexVector::new((0..24).map(|j| Complex64::new((j as f64).sin(), 0.5)).collect()).unwrap();
        let direct = op.apply(&f, &queries).unwrap();
        let bound = op.bind(&queries).unwrap().apply(&f).unwrap();
        assert!(direct.sub(&bound).unwrap().norm() <= 1e-12 * direct.norm());
        assert!(op.apply(&ComplexVector::zeros(23), &queries).is_err());
    }
}
