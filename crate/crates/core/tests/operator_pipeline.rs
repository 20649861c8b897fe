use std::f64::consts::PI;

use helmlearn::geometry::{flower_curve, interior_grid, PointRole, PointSet, Spacing};
use helmlearn::lintik::tikhonov_primal;
use helmlearn::operator::{
    assemble_training_matrix, boundary_trace, learn, mfs_evaluate, ExactField, LearnedOperator, OperatorArchive,
    WaveProblem,
};
use helmlearn::{Complex, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SECTION_K: f64 = 184.799_567_858_223_13;

fn moderate() -> WaveProblem {
    WaveProblem::new(20.0, flower_curve(0.5, 0.1, 6).unwrap(), 96, 96, 1.07, 1e-12).unwrap()
}

fn section() -> WaveProblem {
    let mut p = WaveProblem::new(SECTION_K, flower_curve(0.5, 0.1, 6).unwrap(), 288, 288, 1.07, 1e-12).unwrap();
    p.spacing = Spacing::EqualArcLength;
    p
}

/// Largest `|Δ_h u + k²u| / (k² max|u|)` at random grid points.
fn stencil_residual(k: f64, grid: &PointSet, eval: impl Fn(&[Point2]) -> Vec<Complex>, seed: u64) -> f64 {
    let h = 1e-4;
    let scale = eval(grid.points()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let c = grid.points()[rng.gen_range(0..grid.len())];
        let u = eval(&[
            c,
            Point2::new(c.x + h, c.y),
            Point2::new(c.x - h, c.y),
            Point2::new(c.x, c.y + h),
            Point2::new(c.x, c.y - h),
        ]);
        let lap = (u[1] + u[2] + u[3] + u[4] - u[0] * 4.0) / (h * h);
        worst = worst.max((lap + u[0] * (k * k)).norm() / (k * k * scale));
    }
    worst
}

#[test]
fn reference_fields_solve_helmholtz() {
    let curve = flower_curve(0.5, 0.1, 6).unwrap();
    let grid = interior_grid(&curve, 3000, 0.0).unwrap();
    for k in [5.0, SECTION_K] {
        let fields = [
            ExactField::PlaneProduct { k },
            ExactField::PointSource { source: Point2::new(0.55, 0.0), k },
            ExactField::Dipole { plus: Point2::new(0.45, 0.05), minus: Point2::new(0.45, -0.05), k },
            ExactField::PlaneWave { angle: 0.7, k },
        ];
        for field in fields {
            let r = stencil_residual(k, &grid, |p| field.eval_all(p).unwrap().into_vec(), 11);
            assert!(r <= 1e-2, "{field:?}: {r}");
        }
    }
}

#[test]
fn learned_field_solves_helmholtz() {
    let p = section();
    let op = learn(&p).unwrap();
    let grid = interior_grid(&p.curve, 3000, 0.0).unwrap();
    let f = boundary_trace(&ExactField::PlaneProduct { k: p.k }, op.collocation()).unwrap();
    let eval = |pts: &[Point2]| {
        op.apply(&f, &PointSet::new(PointRole::Query, pts.to_vec()).unwrap()).unwrap().into_vec()
    };
    let r = stencil_residual(p.k, &grid, eval, 5);
    assert!(r <= 1e-2, "{r}");
}

#[test]
fn operator_and_direct_fit_pipelines_agree() {
    let p = moderate();
    let op = learn(&p).unwrap();
    let grid = interior_grid(&p.curve, 2000, 0.0).unwrap();
    let v = assemble_training_matrix(&p).unwrap();
    for field in [ExactField::PlaneWave { angle: 0.3, k: p.k }, ExactField::PlaneProduct { k: p.k }] {
        let f = boundary_trace(&field, op.collocation()).unwrap();
        let dual = op.apply(&f, &grid).unwrap();
        let c = tikhonov_primal(&v, &f, p.alpha).unwrap();
        let primal = mfs_evaluate(op.sources(), &c, p.k, &grid).unwrap();
        let rel = dual.sub(&primal).unwrap().norm() / dual.norm();
        assert!(rel <= 1e-8, "{field:?}: {rel}");
    }
}

#[test]
fn training_functions_are_reproduced() {
    let p = moderate();
    let op = learn(&p).unwrap();
    let grid = interior_grid(&p.curve, 2000, 0.0).unwrap();
    for s in op.sources().points() {
        let field = ExactField::PointSource { source: *s, k: p.k };
        let f = boundary_trace(&field, op.collocation()).unwrap();
        let u = op.apply(&f, &grid).unwrap();
        let exact = field.eval_all(grid.points()).unwrap();
        let rel = u.sub(&exact).unwrap().norm() / exact.norm();
        assert!(rel <= 1e-5, "source {s:?}: {rel}");
    }
}

fn bits(op: &LearnedOperator) -> Vec<u64> {
    op.matrix().as_slice().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect()
}

#[test]
fn learning_is_deterministic() {
    let p = moderate();
    let a = learn(&p).unwrap();
    let b = learn(&p).unwrap();
    assert_eq!(bits(&a), bits(&b));
    let grid = interior_grid(&p.curve, 500, 0.0).unwrap();
    let f = boundary_trace(&ExactField::PlaneWave { angle: 1.0, k: p.k }, a.collocation()).unwrap();
    let ua = a.apply(&f, &grid).unwrap();
    let ub = b.apply(&f, &grid).unwrap();
    assert_eq!(ua, ub);
}

#[test]
fn archive_round_trip_preserves_results() {
    let p = moderate();
    let op = learn(&p).unwrap();
    let grid = interior_grid(&p.curve, 800, 0.0).unwrap();
    let bound = op.bind(&grid).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("op.bin");
    OperatorArchive { learned: op.clone(), bound: Some(bound.clone()) }.save(&path).unwrap();
    let back = OperatorArchive::load(&path).unwrap();
    assert_eq!(bits(&back.learned), bits(&op));
    let f = boundary_trace(&ExactField::PlaneProduct { k: p.k }, op.collocation()).unwrap();
    assert_eq!(back.bound.unwrap().apply(&f).unwrap(), bound.apply(&f).unwrap());
}

#[test]
fn error_grows_as_the_singularity_approaches() {
    let p = section();
    let op = learn(&p).unwrap();
    let grid = interior_grid(&p.curve, 3000, 0.0).unwrap();
    let angle = PI / 6.0 + PI / 288.0;
    let mut previous = 0.0;
    for radius in [1.5, 1.2, 1.07, 0.9, 0.7] {
        let field = ExactField::PointSource { source: Point2::polar(radius, angle), k: p.k };
        let f = boundary_trace(&field, op.collocation()).unwrap();
        let err = op.apply(&f, &grid).unwrap().sub(&field.eval_all(grid.points()).unwrap()).unwrap().norm();
        assert!(err >= 0.9 * previous, "radius {radius}: {err} after {previous}");
        previous = err;
    }
}

#[test]
fn error_regimes_are_ordered() {
    let p = section();
    let op = learn(&p).unwrap();
    let grid = interior_grid(&p.curve, 3000, 0.0).unwrap();
    let k = p.k;
    let cases = [
        ExactField::PlaneProduct { k },
        ExactField::PointSource { source: Point2::new(0.55, 0.0), k },
        ExactField::Dipole { plus: Point2::new(0.45, 0.05), minus: Point2::new(0.45, -0.05), k },
    ];
    let errs: Vec<f64> = cases
        .iter()
        .map(|field| {
            let f = boundary_trace(field, op.collocation()).unwrap();
            op.apply(&f, &grid).unwrap().sub(&field.eval_all(grid.points()).unwrap()).unwrap().norm()
        })
        .collect();
    assert!(errs[0] < errs[1] && errs[1] < errs[2], "{errs:?}");
}
