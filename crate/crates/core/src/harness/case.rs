use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, FieldConfig};
use super::output::{float, write_csv, write_json};
use crate::analytics::{error_report, ErrorReport, Timings};
use crate::error::{Error, Result};
use crate::geometry::{interior_grid, BoundaryCurve, PointRole, PointSet, Spacing};
use crate::lintik::ComplexVector;
use crate::operator::{boundary_trace, learn, ExactField, LearnedOperator, OperatorArchive, QueryOperator, WaveProblem};
use crate::point::Point2;

/// Apply timings are the median of this many repetitions.
pub const APPLY_REPEATS: usize = 5;
const PROBES: usize = 20;
const PROBE_STEP: f64 = 1e-4;

/// Wall-clock breakdown of one run, in seconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTimings {
    pub assemble_s: f64,
    pub factor_s: f64,
    pub bind_rows_s: f64,
    pub bind_product_s: f64,
    /// Everything needed before data arrives: `W` plus `A = B_X W`.
    pub learn_s: f64,
    /// `W f` alone.
    pub coefficients_s: f64,
    /// `A f`, the field at every query point (median).
    pub apply_s: f64,
    /// Reading a serialized operator, when one was used.
    pub load_s: Option<f64>,
}

/// Problem parameters after defaults are filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedProblem {
    pub k: f64,
    pub alpha: f64,
    pub collocation: usize,
    pub sources: usize,
    pub source_radius: f64,
    pub curve: BoundaryCurve,
    pub spacing: Spacing,
}

impl From<&WaveProblem> for ResolvedProblem {
    fn from(p: &WaveProblem) -> Self {
        Self {
            k: p.k,
            alpha: p.alpha,
            collocation: p.collocation,
            sources: p.sources,
            source_radius: p.source_radius,
            curve: p.curve.clone(),
            spacing: p.spacing,
        }
    }
}

/// Outcome of `run_case`.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub problem: ResolvedProblem,
    pub report: ErrorReport,
    /// `max_j |u(x_j) − f_j|` over the collocation points.
    pub boundary_residual: f64,
    /// Largest five-point-stencil residual `|Δ_h u + k²u| / (k² max|u|)` at random grid points.
    pub pde_residual: f64,
    pub artifacts: Vec<PathBuf>,
    pub timings: RunTimings,
    pub exact: ComplexVector,
    pub numeric: ComplexVector,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    seed: u64,
    problem: &'a ResolvedProblem,
    field: &'a FieldConfig,
    operator_loaded: bool,
    point_count: usize,
    two_norm: f64,
    inf_norm: f64,
    rms: f64,
    boundary_residual: f64,
    pde_residual: f64,
    artifacts: Vec<String>,
}

pub(crate) fn file_names(paths: &[PathBuf]) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
        .collect()
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Median wall time of `APPLY_REPEATS` evaluations, with the first result.
pub(crate) fn timed_median<T>(mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let mut times = Vec::with_capacity(APPLY_REPEATS);
    let mut first = None;
    for _ in 0..APPLY_REPEATS {
        let start = Instant::now();
        let out = f()?;
        times.push(start.elapsed().as_secs_f64());
        first.get_or_insert(out);
    }
    times.sort_by(f64::total_cmp);
    Ok((first.expect("at least one repetition"), times[APPLY_REPEATS / 2]))
}

fn check_matches(op: &LearnedOperator, problem: &WaveProblem) -> Result<()> {
    let same_k = (op.k() - problem.k).abs() <= 1e-12 * problem.k;
    if !same_k || op.source_count() != problem.sources || op.collocation_count() != problem.collocation {
        return Err(Error::Config(format!(
            "serialized operator (k={}, M={}, N={}) does not match the configured problem (k={}, M={}, N={})",
            op.k(),
            op.source_count(),
            op.collocation_count(),
            problem.k,
            problem.sources,
            problem.collocation
        )));
    }
    Ok(())
}

/// Learned and bound operator, either fresh or from an archive.
pub(crate) struct Prepared {
    pub learned: LearnedOperator,
    pub bound: QueryOperator,
    pub timings: RunTimings,
}

pub(crate) fn prepare(config: &ExperimentConfig, problem: &WaveProblem) -> Result<Prepared> {
    let mut timings = RunTimings::default();
    let (learned, bound) = match &config.operator {
        Some(path) => {
            let start = Instant::now();
            let archive = OperatorArchive::load(path)?;
            timings.load_s = Some(start.elapsed().as_secs_f64());
            check_matches(&archive.learned, problem)?;
            (archive.learned, archive.bound)
        }
        None => (learn(problem)?, None),
    };
    let lt = learned.timings();
    timings.assemble_s = lt.assemble_s;
    timings.factor_s = lt.solve_s;
    let bound = match bound {
        Some(b) => b,
        None => {
            let grid = interior_grid(&problem.curve, config.grid.target_count, config.grid.margin)?;
            learned.bind(&grid)?
        }
    };
    let bt = bound.timings();
    timings.bind_rows_s = bt.rows_s;
    timings.bind_product_s = bt.product_s;
    timings.learn_s = lt.total() + bt.total();
    Ok(Prepared { learned, bound, timings })
}

/// Learns (or loads) the operator, binds it to the query grid, applies it to
/// the configured field's boundary trace and compares with the exact field.
pub fn run_case(config: &ExperimentConfig) -> Result<RunRecord> {
    config.validate()?;
    let problem = config.problem.resolve()?;
    let field = config.field.build(problem.k);
    let Prepared { learned, bound, mut timings } = prepare(config, &problem)?;

    let f = boundary_trace(&field, learned.collocation())?;
    let start = Instant::now();
    learned.coefficients(&f)?;
    timings.coefficients_s = start.elapsed().as_secs_f64();
    let (numeric, apply_s) = timed_median(|| bound.apply(&f))?;
    timings.apply_s = apply_s;

    let grid = bound.queries();
    let exact = field.eval_all(grid.points())?;
    let report = error_report(
        &exact,
        &numeric,
        Timings {
            learn_s: timings.learn_s,
            apply_s: timings.apply_s,
        },
    )?;
    let on_boundary = learned.apply(&f, learned.collocation())?;
    let boundary_residual = on_boundary.sub(&f)?.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pde_residual = stencil_residual(&learned, &f, grid, &numeric, config.seed)?;

    let dir = config.output_dir();
    create_dir(&dir)?;
    let mut artifacts = Vec::new();
    if config.output.fields {
        let path = dir.join("fields.csv");
        write_fields(&path, grid, &numeric, Some(&exact))?;
        artifacts.push(path);
    }
    let path = dir.join("boundary.csv");
    write_boundary(&path, learned.collocation(), &f)?;
    artifacts.push(path);
    let resolved = ResolvedProblem::from(&problem);
    let report_path = dir.join("report.json");
    let timing_path = dir.join("timing.json");
    artifacts.push(report_path.clone());
    artifacts.push(timing_path.clone());
    write_json(
        &report_path,
        &ReportFile {
            seed: config.seed,
            problem: &resolved,
            field: &config.field,
            operator_loaded: config.operator.is_some(),
            point_count: report.point_count,
            two_norm: report.two_norm,
            inf_norm: report.inf_norm,
            rms: report.rms,
            boundary_residual,
            pde_residual,
            artifacts: file_names(&artifacts),
        },
    )?;
    write_json(&timing_path, &timings)?;

    Ok(RunRecord {
        config: config.clone(),
        problem: resolved,
        report,
        boundary_residual,
        pde_residual,
        artifacts,
        timings,
        exact,
        numeric,
    })
}

/// Discrete Helmholtz residual at `PROBES` seeded grid points.
fn stencil_residual(
    op: &LearnedOperator,
    f: &ComplexVector,
    grid: &PointSet,
    values: &ComplexVector,
    seed: u64,
) -> Result<f64> {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 || grid.is_empty() {
        return Ok(0.0);
    }
    let k2 = op.k() * op.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = PROBE_STEP;
    let mut worst = 0.0f64;
    for _ in 0..PROBES {
        let c = grid.points()[rng.gen_range(0..grid.len())];
        let stencil = vec![
            c,
            Point2::new(c.x + h, c.y),
            Point2::new(c.x - h, c.y),
            Point2::new(c.x, c.y + h),
            Point2::new(c.x, c.y - h),
        ];
        let u = op.apply(f, &PointSet::new(PointRole::Query, stencil)?)?;
        let lap: Complex64 = (u[1] + u[2] + u[3] + u[4] - u[0] * 4.0) / (h * h);
        worst = worst.max((lap + u[0] * k2).norm() / (k2 * scale));
    }
    Ok(worst)
}

/// `x,y,re_num,im_num,re_exact,im_exact,abs_err`, or `x,y,re,im` without a reference.
pub fn write_fields(
    path: &Path,
    points: &PointSet,
    numeric: &ComplexVector,
    exact: Option<&ComplexVector>,
) -> Result<()> {
    let pts = points.points();
    match exact {
        Some(exact) => write_csv(
            path,
            &["x", "y", "re_num", "im_num", "re_exact", "im_exact", "abs_err"],
            pts.iter().zip(numeric.iter()).zip(exact.iter()).map(|((p, u), e)| {
                vec![
                    float(p.x),
                    float(p.y),
                    float(u.re),
                    float(u.im),
                    float(e.re),
                    float(e.im),
                    float((u - e).norm()),
                ]
            }),
        ),
        None => write_csv(
            path,
            &["x", "y", "re", "im"],
            pts.iter()
                .zip(numeric.iter())
                .map(|(p, u)| vec![float(p.x), float(p.y), float(u.re), float(u.im)]),
        ),
    }
}

/// Boundary data as `x,y,re,im`, one row per collocation point.
pub fn write_boundary(path: &Path, collocation: &PointSet, f: &ComplexVector) -> Result<()> {
    write_fields(path, collocation, f, None)
}

#[derive(Deserialize)]
struct BoundaryRow {
    x: f64,
    y: f64,
    re: f64,
    im: f64,
}

/// Reads `x,y,re,im` boundary data.
pub fn read_boundary(path: &Path) -> Result<(Vec<Point2>, ComplexVector)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut points = Vec::new();
    let mut values = Vec::new();
    for row in reader.deserialize() {
        let row: BoundaryRow = row?;
        points.push(Point2::new(row.x, row.y));
        values.push(Complex64::new(row.re, row.im));
    }
    Ok((points, ComplexVector::new(values)?))
}

/// Builds the operator for `config`, binds it to the query grid and saves both.
pub fn learn_to_archive(config: &ExperimentConfig, path: &Path) -> Result<RunTimings> {
    config.validate()?;
    let problem = config.problem.resolve()?;
    let Prepared { learned, bound, timings } = prepare(config, &problem)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    OperatorArchive {
        learned,
        bound: Some(bound),
    }
    .save(path)?;
    Ok(timings)
}

/// Result of applying a serialized operator to a boundary-data file.
#[derive(Clone, Debug)]
pub struct SolveRecord {
    pub numeric: ComplexVector,
    pub queries: PointSet,
    pub report: Option<ErrorReport>,
    pub timings: RunTimings,
    pub artifacts: Vec<PathBuf>,
}

/// Applies the operator stored at `operator` to the data in `boundary`.
///
/// With a `reference` field the output includes the exact values and a report.
pub fn solve_from_archive(
    operator: &Path,
    boundary: &Path,
    reference: Option<&ExactField>,
    out_dir: &Path,
) -> Result<SolveRecord> {
    let mut timings = RunTimings::default();
    let start = Instant::now();
    let archive = OperatorArchive::load(operator)?;
    timings.load_s = Some(start.elapsed().as_secs_f64());
    let bound = archive
        .bound
        .ok_or_else(|| Error::Archive("operator is not bound to query points; rebuild it with `learn`".into()))?;
    let (points, f) = read_boundary(boundary)?;
    let n = archive.learned.collocation_count();
    if f.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "boundary data has {} values, operator expects N = {n}",
            f.len()
        )));
    }
    let expected = archive.learned.collocation().points();
    if let Some(j) = (0..n).find(|&j| points[j].distance(expected[j]) > 1e-9) {
        return Err(Error::InvalidParameter(format!(
            "boundary row {j} at ({}, {}) is not collocation point ({}, {})",
            points[j].x, points[j].y, expected[j].x, expected[j].y
        )));
    }
    let (numeric, apply_s) = timed_median(|| bound.apply(&f))?;
    timings.apply_s = apply_s;

    create_dir(out_dir)?;
    let mut artifacts = Vec::new();
    let exact = reference.map(|field| field.eval_all(bound.queries().points())).transpose()?;
    let fields_path = out_dir.join(if exact.is_some() { "fields.csv" } else { "solution.csv" });
    write_fields(&fields_path, bound.queries(), &numeric, exact.as_ref())?;
    artifacts.push(fields_path);
    let report = match &exact {
        Some(exact) => {
            let r = error_report(exact, &numeric, Timings { learn_s: 0.0, apply_s })?;
            let path = out_dir.join("solve_report.json");
            write_json(
                &path,
                &serde_json::json!({
                    "point_count": r.point_count,
                    "two_norm": r.two_norm,
                    "inf_norm": r.inf_norm,
                    "rms": r.rms,
                }),
            )?;
            artifacts.push(path);
            Some(r)
        }
        None => None,
    };
    let path = out_dir.join("solve_timing.json");
    write_json(&path, &timings)?;
    artifacts.push(path);
    Ok(SolveRecord {
        numeric,
        queries: bound.queries().clone(),
        report,
        timings,
        artifacts,
    })
}
