use std::f64::consts::TAU;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::curve::BoundaryCurve;
use crate::error::{Error, Result};
use crate::point::Point2;

/// What a point set is used for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointRole {
    Collocation,
    Source,
    Query,
}

/// How collocation points are distributed along the curve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    /// `t_j = 2πj/N`.
    #[default]
    EqualParameter,
    /// Equal arc length between consecutive points, starting at `γ(0)`.
    EqualArcLength,
}

/// Ordered points with a role and, for collocation sets, arc-length weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    role: PointRole,
    points: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl PointSet {
    pub fn new(role: PointRole, points: Vec<Point2>) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(Self {
            role,
            points,
            weights: None,
        })
    }

    pub fn with_weights(role: PointRole, points: Vec<Point2>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != points.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} points",
                weights.len(),
                points.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("weights must be positive and finite".into()));
        }
        let mut set = Self::new(role, points)?;
        set.weights = Some(weights);
        Ok(set)
    }

    pub fn role(&self) -> PointRole {
        self.role
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_radius(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Writes `x,y[,weight]` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        match &self.weights {
            Some(weights) => {
                w.write_record(["x", "y", "weight"])?;
                for (p, wt) in self.points.iter().zip(weights) {
                    w.write_record(&[fmt(p.x), fmt(p.y), fmt(*wt)])?;
                }
            }
            None => {
                w.write_record(["x", "y"])?;
                for p in &self.points {
                    w.write_record(&[fmt(p.x), fmt(p.y)])?;
                }
            }
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Reads the format produced by [`PointSet::write_csv`]; the weight column is optional.
    pub fn read_csv<R: Read>(reader: R, role: PointRole) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h.trim() == name);
        let (xi, yi) = match (col("x"), col("y")) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::InvalidParameter("point CSV needs x and y columns".into())),
        };
        let wi = col("weight");
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("bad number on data row {}", line + 1)))
            };
            points.push(Point2::new(field(xi)?, field(yi)?));
            if let Some(wi) = wi {
                weights.push(field(wi)?);
            }
        }
        match wi {
            Some(_) => Self::with_weights(role, points, weights),
            None => Self::new(role, points),
        }
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

/// Collocation points at equal parameter spacing.
pub fn collocation_points(curve: &BoundaryCurve, n: usize) -> Result<PointSet> {
    collocation_points_with(curve, n, Spacing::EqualParameter)
}

pub fn collocation_points_with(curve: &BoundaryCurve, n: usize, spacing: Spacing) -> Result<PointSet> {
    if n < 8 {
        return Err(Error::InvalidParameter(format!(
            "need at least 8 collocation points, got {n}"
        )));
    }
    curve.validate()?;
    let params = match spacing {
        Spacing::EqualParameter => (0..n).map(|j| TAU * j as f64 / n as f64).collect(),
        Spacing::EqualArcLength => equal_arclength_params(curve, n),
    };
    let points = params.iter().map(|&t| curve.point(t)).collect();
    let weights = (0..n)
        .map(|j| {
            let prev = if j == 0 { params[n - 1] - TAU } else { params[j - 1] };
            let next = if j + 1 == n { params[0] + TAU } else { params[j + 1] };
            curve.arc_length_between(0.5 * (prev + params[j]), 0.5 * (params[j] + next))
        })
        .collect();
    PointSet::with_weights(PointRole::Collocation, points, weights)
}

/// Parameters `t_j` with `s(t_j) = j L / n`.
fn equal_arclength_params(curve: &BoundaryCurve, n: usize) -> Vec<f64> {
    let panels = (8 * n).max(256);
    let h = TAU / panels as f64;
    let mut cumulative = Vec::with_capacity(panels + 1);
    cumulative.push(0.0);
    for i in 0..panels {
        let s = cumulative[i] + curve.arc_length_between(i as f64 * h, (i + 1) as f64 * h);
        cumulative.push(s);
    }
    let total = cumulative[panels];
    (0..n)
        .map(|j| {
            let target = total * j as f64 / n as f64;
            let panel = match cumulative.binary_search_by(|s| s.total_cmp(&target)) {
                Ok(i) => return i as f64 * h,
                Err(i) => i - 1,
            };
            let t0 = panel as f64 * h;
            let mut t = t0 + h * (target - cumulative[panel]) / (cumulative[panel + 1] - cumulative[panel]);
            for _ in 0..20 {
                let f = cumulative[panel] + curve.arc_length_between(t0, t) - target;
                let dt = f / curve.speed(t);
                t = (t - dt).clamp(t0, t0 + h);
                if dt.abs() < 1e-15 {
                    break;
                }
            }
            t
        })
        .collect()
}

/// `M` sources equally spaced on the circle of radius `radius`, starting on the +x axis.
///
/// Whether the circle encloses the domain is checked when an operator is
/// assembled, not here.
pub fn source_points(radius: f64, m: usize) -> Result<PointSet> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 sources, got {m}")));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "source radius must be positive, got {radius}"
        )));
    }
    let points = (0..m)
        .map(|i| Point2::polar(radius, TAU * i as f64 / m as f64))
        .collect();
    PointSet::new(PointRole::Source, points)
}

/// Cartesian lattice points strictly inside `(1 − margin) ρ(θ)`, with the
/// pitch tuned so the count lands near `target_count`.
pub fn interior_grid(curve: &BoundaryCurve, target_count: usize, margin: f64) -> Result<PointSet> {
    curve.validate()?;
    if target_count == 0 {
        return Err(Error::InvalidParameter("target_count must be positive".into()));
    }
    if !(0.0..1.0).contains(&margin) {
        return Err(Error::InvalidParameter(format!("margin must lie in [0, 1), got {margin}")));
    }
    let scale = 1.0 - margin;
    let reach = scale * curve.max_radius();
    let target = target_count as f64;

    let lattice = |h: f64| -> Vec<Point2> {
        let steps = (reach / h).floor() as i64;
        let mut pts = Vec::new();
        for iy in -steps..=steps {
            for ix in -steps..=steps {
                let p = Point2::new(ix as f64 * h, iy as f64 * h);
                if curve.contains(p, margin) {
                    pts.push(p);
                }
            }
        }
        pts
    };

    let mut h = (curve.area() * scale * scale / target).sqrt();
    let mut best = lattice(h);
    for _ in 0..30 {
        let err = (best.len() as f64 - target).abs() / target;
        if err <= 0.005 {
            break;
        }
        h *= (best.len().max(1) as f64 / target).sqrt();
        let candidate = lattice(h);
        if (candidate.len() as f64 - target).abs() < (best.len() as f64 - target).abs() {
            best = candidate;
        }
    }
    if best.is_empty() {
        return Err(Error::InvalidCurve("no lattice points fall inside the curve".into()));
    }
    PointSet::new(PointRole::Query, best)
}
