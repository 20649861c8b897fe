use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, Spacing};
use crate::operator::{default_alpha, wavenumber, ExactField, WaveProblem};
use crate::point::Point2;

/// Environment variable that overrides the output directory.
pub const OUTPUT_DIR_ENV: &str = "HELMLEARN_OUTPUT_DIR";

/// One experiment, as read from a TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Serialized operator to load instead of learning one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Wavenumber; alternatively give `frequency_hz` (and `sound_speed`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_hz: Option<f64>,
    #[serde(default = "default_sound_speed")]
    pub sound_speed: f64,
    pub curve: BoundaryCurve,
    pub collocation: usize,
    pub sources: usize,
    pub source_radius: f64,
    /// Defaults to `max(M N R^{-2M}, 1e-15)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub spacing: Spacing,
}

fn default_sound_speed() -> f64 {
    340.0
}

impl ProblemConfig {
    pub fn wavenumber(&self) -> Result<f64> {
        match (self.k, self.frequency_hz) {
            (Some(k), None) => Ok(k),
            (None, Some(f)) => wavenumber(f, self.sound_speed),
            (Some(_), Some(_)) => Err(Error::Config("give either k or frequency_hz, not both".into())),
            (None, None) => Err(Error::Config("problem needs k or frequency_hz".into())),
        }
    }

    pub fn resolve(&self) -> Result<WaveProblem> {
        let alpha = match self.alpha {
            Some(a) => a,
            None => default_alpha(self.sources, self.collocation, self.source_radius)?,
        };
        let mut p = WaveProblem::new(
            self.wavenumber()?,
            self.curve.clone(),
            self.collocation,
            self.sources,
            self.source_radius,
            alpha,
        )?;
        p.spacing = self.spacing;
        Ok(p)
    }
}

/// Reference field; its wavenumber is the problem's.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldConfig {
    #[default]
    PlaneProduct,
    PointSource {
        source: [f64; 2],
    },
    Dipole {
        plus: [f64; 2],
        minus: [f64; 2],
    },
    PlaneWave {
        angle: f64,
    },
    Zero,
}

impl FieldConfig {
    pub fn build(&self, k: f64) -> ExactField {
        let pt = |p: [f64; 2]| Point2::new(p[0], p[1]);
        match *self {
            FieldConfig::PlaneProduct => ExactField::PlaneProduct { k },
            FieldConfig::PointSource { source } => ExactField::PointSource { source: pt(source), k },
            FieldConfig::Dipole { plus, minus } => ExactField::Dipole {
                plus: pt(plus),
                minus: pt(minus),
                k,
            },
            FieldConfig::PlaneWave { angle } => ExactField::PlaneWave { angle, k },
            FieldConfig::Zero => ExactField::Zero,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_target")]
    pub target_count: usize,
    #[serde(default)]
    pub margin: f64,
}

fn default_target() -> usize {
    37500
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            target_count: default_target(),
            margin: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Write the per-point field CSV.
    #[serde(default = "yes")]
    pub fields: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            fields: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    /// `M`.
    Sources,
    /// `N`.
    Collocation,
    /// `R`.
    SourceRadius,
    Alpha,
    /// Distance of a point-source test field from the origin.
    FieldSourceRadius,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMethod {
    /// Learned operator applied to the data.
    #[default]
    Learned,
    /// Direct fundamental-solution fit of the data.
    Mfs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluationSet {
    #[default]
    Grid,
    /// Fine equal-parameter boundary points; errors use the arc-length weighted norm.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    #[serde(default)]
    pub method: SweepMethod,
    #[serde(default)]
    pub evaluate: EvaluationSet,
    /// When sweeping `M`, use `N = ratio · M` collocation points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collocation_ratio: Option<f64>,
    #[serde(default = "default_boundary_points")]
    pub boundary_points: usize,
    /// Direction of the test source when sweeping its radius.
    #[serde(default)]
    pub field_angle: f64,
}

fn default_boundary_points() -> usize {
    1024
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.values.len() < 4 {
            return Err(Error::Config(format!(
                "sweep needs at least 4 values, got {}",
                self.values.len()
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("sweep values must be finite".into()));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("sweep values must be strictly increasing".into()));
        }
        if matches!(self.parameter, SweepParameter::Sources | SweepParameter::Collocation)
            && self.values.iter().any(|v| v.fract() != 0.0 || *v < 1.0)
        {
            return Err(Error::Config("point counts in a sweep must be positive integers".into()));
        }
        if let Some(r) = self.collocation_ratio {
            if !(r > 0.0) {
                return Err(Error::Config("collocation_ratio must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoConfig {
    #[serde(default = "default_rho_count")]
    pub count: usize,
    /// Radius of the sampling circle.
    #[serde(default = "unit")]
    pub radius: f64,
}

fn default_rho_count() -> usize {
    256
}

fn unit() -> f64 {
    1.0
}

impl Default for RhoConfig {
    fn default() -> Self {
        Self {
            count: default_rho_count(),
            radius: 1.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        // relative operator paths are relative to the config file
        if let (Some(op), Some(dir)) = (&cfg.operator, path.parent()) {
            if op.is_relative() {
                cfg.operator = Some(dir.join(op));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.resolve()?;
        if self.grid.target_count == 0 {
            return Err(Error::Config("grid.target_count must be positive".into()));
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        Ok(())
    }

    /// Output directory after the environment override.
    pub fn output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output.dir.clone(),
        }
    }
}
