use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::case::{file_names, timed_median};
use super::config::{EvaluationSet, ExperimentConfig, FieldConfig, SweepConfig, SweepMethod, SweepParameter};
use super::output::{float, write_csv, write_json};
use crate::analytics::{above_floor, error_report, fit_decay, weighted_l2, DecayFit, Timings};
use crate::error::{Error, Result};
use crate::geometry::{collocation_points, interior_grid, PointRole, PointSet};
use crate::lintik::ComplexMatrix;
use crate::operator::{boundary_trace, fundamental_matrix, learn, mfs_direct_fit, WaveProblem};
use crate::point::Point2;

/// One sweep value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub sources: usize,
    pub collocation: usize,
    pub alpha: f64,
    pub two_norm: f64,
    pub inf_norm: f64,
    /// Arc-length weighted norm, when evaluating on the boundary.
    pub boundary_l2: Option<f64>,
    /// `M ‖μ‖²` for direct fits, `M ‖W f‖²` for learned operators.
    pub scaled_coefficient_norm: f64,
    pub data_norm: f64,
    /// Whether the row lies above the `100 α ‖f‖` floor and entered the fit.
    pub fitted: bool,
    pub learn_s: f64,
    pub apply_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub parameter: SweepParameter,
    pub method: SweepMethod,
    pub evaluate: EvaluationSet,
    pub rows: Vec<SweepRow>,
    /// Fit of `log₁₀ error` against the parameter (`log₁₀ α` for α sweeps).
    pub fit: Option<DecayFit>,
    pub fit_error: Option<String>,
    /// Largest over smallest `M ‖coefficients‖²` across the sweep.
    pub coefficient_spread: f64,
}

impl SweepRecord {
    /// Error the fit uses for `row`.
    pub fn metric(&self, row: &SweepRow) -> f64 {
        row.boundary_l2.unwrap_or(row.two_norm)
    }
}

#[derive(Serialize)]
struct SweepFile<'a> {
    seed: u64,
    parameter: SweepParameter,
    method: SweepMethod,
    evaluate: EvaluationSet,
    rows: Vec<RowView>,
    fit: &'a Option<DecayFit>,
    fit_error: &'a Option<String>,
    coefficient_spread: f64,
    artifacts: Vec<String>,
}

#[derive(Serialize)]
struct RowView {
    param: f64,
    sources: usize,
    collocation: usize,
    alpha: f64,
    two_norm: f64,
    inf_norm: f64,
    boundary_l2: Option<f64>,
    scaled_coefficient_norm: f64,
    data_norm: f64,
    fitted: bool,
}

fn point_count(v: f64) -> usize {
    v.round() as usize
}

fn configure(base: &ExperimentConfig, sweep: &SweepConfig, value: f64) -> Result<(WaveProblem, FieldConfig)> {
    let mut problem = base.problem.clone();
    let mut field = base.field.clone();
    match sweep.parameter {
        SweepParameter::Sources => {
            problem.sources = point_count(value);
            if let Some(ratio) = sweep.collocation_ratio {
                problem.collocation = (ratio * value).round() as usize;
            }
        }
        SweepParameter::Collocation => problem.collocation = point_count(value),
        SweepParameter::SourceRadius => problem.source_radius = value,
        SweepParameter::Alpha => problem.alpha = Some(value),
        SweepParameter::FieldSourceRadius => {
            field = FieldConfig::PointSource {
                source: [value * sweep.field_angle.cos(), value * sweep.field_angle.sin()],
            }
        }
    }
    Ok((problem.resolve()?, field))
}

fn bits(x: f64) -> u64 {
    x.to_bits()
}

/// Runs every sweep value, sharing the evaluation set, evaluation matrices
/// (keyed by `M`, `R`) and learned operators (keyed by `M`, `N`, `R`, `α`).
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepRecord> {
    config.validate()?;
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("config has no [sweep] section".into()))?;
    let k = config.problem.wavenumber()?;
    let curve = &config.problem.curve;
    let targets = match sweep.evaluate {
        EvaluationSet::Grid => interior_grid(curve, config.grid.target_count, config.grid.margin)?,
        EvaluationSet::Boundary => collocation_points(curve, sweep.boundary_points)?,
    };

    let mut eval_cache: HashMap<(usize, u64), ComplexMatrix> = HashMap::new();
    let mut op_cache = HashMap::new();
    let mut rows = Vec::with_capacity(sweep.values.len());
    for &value in &sweep.values {
        let (problem, field_cfg) = configure(config, sweep, value)?;
        let field = field_cfg.build(k);
        let exact = field.eval_all(targets.points())?;
        let collocation = problem.collocation_points()?;
        let f = boundary_trace(&field, &collocation)?;

        let mut learn_s = 0.0;
        let key = (problem.sources, bits(problem.source_radius));
        if !eval_cache.contains_key(&key) {
            let start = Instant::now();
            let b = fundamental_matrix(&problem.source_points()?, &targets, k)?;
            learn_s += start.elapsed().as_secs_f64();
            eval_cache.insert(key, b);
        }
        let b = &eval_cache[&key];

        let (coefficients, apply_s) = match sweep.method {
            SweepMethod::Learned => {
                let op_key = (problem.sources, problem.collocation, bits(problem.source_radius), bits(problem.alpha));
                if !op_cache.contains_key(&op_key) {
                    let op = learn(&problem)?;
                    learn_s += op.timings().total();
                    op_cache.insert(op_key, op);
                }
                let op = &op_cache[&op_key];
                timed_median(|| op.coefficients(&f))?
            }
            SweepMethod::Mfs => {
                let start = Instant::now();
                let mu = mfs_direct_fit(&problem, &f)?;
                learn_s += start.elapsed().as_secs_f64();
                (mu, 0.0)
            }
        };
        let (numeric, product_s) = timed_median(|| b.mul_vec(&coefficients))?;
        let report = error_report(&exact, &numeric, Timings::default())?;
        let boundary_l2 = match sweep.evaluate {
            EvaluationSet::Boundary => {
                let weights = targets.weights().ok_or(Error::InvalidParameter("boundary set lacks weights".into()))?;
                Some(weighted_l2(&exact, &numeric, weights)?)
            }
            EvaluationSet::Grid => None,
        };
        rows.push(SweepRow {
            param: value,
            sources: problem.sources,
            collocation: problem.collocation,
            alpha: problem.alpha,
            two_norm: report.two_norm,
            inf_norm: report.inf_norm,
            boundary_l2,
            scaled_coefficient_norm: problem.sources as f64 * coefficients.norm_sqr(),
            data_norm: f.norm(),
            fitted: false,
            learn_s,
            apply_s: apply_s + product_s,
        });
    }

    let mut record = SweepRecord {
        parameter: sweep.parameter,
        method: sweep.method,
        evaluate: sweep.evaluate,
        rows,
        fit: None,
        fit_error: None,
        coefficient_spread: 0.0,
    };
    let mut samples = Vec::new();
    for i in 0..record.rows.len() {
        let row = &record.rows[i];
        let x = if sweep.parameter == SweepParameter::Alpha { row.param.log10() } else { row.param };
        let kept = above_floor(&[(x, record.metric(row))], row.alpha, row.data_norm);
        record.rows[i].fitted = !kept.is_empty() && kept[0].1 > 0.0;
        samples.extend(kept);
    }
    match fit_decay(&samples) {
        Ok(fit) => record.fit = Some(fit),
        Err(e) => record.fit_error = Some(e.to_string()),
    }
    let norms = record.rows.iter().map(|r| r.scaled_coefficient_norm);
    let hi = norms.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = norms.fold(f64::INFINITY, f64::min);
    record.coefficient_spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };

    write_outputs(config, &record)?;
    Ok(record)
}

fn write_outputs(config: &ExperimentConfig, record: &SweepRecord) -> Result<()> {
    let dir = config.output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let csv_path = dir.join("sweep.csv");
    let json_path = dir.join("sweep.json");
    write_csv(
        &csv_path,
        &["param", "two_norm", "inf_norm", "learn_s", "apply_s"],
        record.rows.iter().map(|r| {
            vec![float(r.param), float(r.two_norm), float(r.inf_norm), float(r.learn_s), float(r.apply_s)]
        }),
    )?;
    write_json(
        &json_path,
        &SweepFile {
            seed: config.seed,
            parameter: record.parameter,
            method: record.method,
            evaluate: record.evaluate,
            rows: record
                .rows
                .iter()
                .map(|r| RowView {
                    param: r.param,
                    sources: r.sources,
                    collocation: r.collocation,
                    alpha: r.alpha,
                    two_norm: r.two_norm,
                    inf_norm: r.inf_norm,
                    boundary_l2: r.boundary_l2,
                    scaled_coefficient_norm: r.scaled_coefficient_norm,
                    data_norm: r.data_norm,
                    fitted: r.fitted,
                })
                .collect(),
            fit: &record.fit,
            fit_error: &record.fit_error,
            coefficient_spread: record.coefficient_spread,
            artifacts: file_names(&[csv_path.clone(), json_path.clone()]),
        },
    )
}

/// Direct fundamental-solution fits over the configured `M` sweep, measured
/// on a fine boundary set.
pub fn run_mfs_bench(config: &ExperimentConfig) -> Result<SweepRecord> {
    let mut config = config.clone();
    let sweep = config
        .sweep
        .as_mut()
        .ok_or_else(|| Error::Config("bench-mfs needs a [sweep] section".into()))?;
    sweep.method = SweepMethod::Mfs;
    sweep.evaluate = EvaluationSet::Boundary;
    run_sweep(&config)
}

/// Continuation-radius estimate from samples of the configured field on a circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoRecord {
    pub count: usize,
    pub radius: f64,
    pub rate: f64,
    pub r_squared: f64,
    /// Estimated singularity distance, in the same units as `radius`.
    pub rho: f64,
}

pub fn run_estimate_rho(config: &ExperimentConfig) -> Result<RhoRecord> {
    config.validate()?;
    let rc = config.rho.clone().unwrap_or_default();
    if !(rc.radius > 0.0) || !rc.radius.is_finite() {
        return Err(Error::Config("rho.radius must be positive".into()));
    }
    let k = config.problem.wavenumber()?;
    let field = config.field.build(k);
    let pts: Vec<Point2> = (0..rc.count)
        .map(|j| Point2::polar(rc.radius, std::f64::consts::TAU * j as f64 / rc.count as f64))
        .collect();
    let samples = field.eval_all(PointSet::new(PointRole::Query, pts)?.points())?;
    let est = crate::analytics::estimate_rho(&samples)?;
    let record = RhoRecord {
        count: rc.count,
        radius: rc.radius,
        rate: est.fit.rate,
        r_squared: est.fit.r_squared,
        rho: est.rho * rc.radius,
    };
    let dir = config.output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_json(&dir.join("rho.json"), &record)?;
    Ok(record)
}
