use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::case::{learn_to_archive, run_case, solve_from_archive};
use super::config::{ExperimentConfig, OUTPUT_DIR_ENV};
use super::sweep::{run_estimate_rho, run_mfs_bench, run_sweep, SweepRecord};
use crate::error::Result;

#[derive(Parser, Debug)]
#[command(name = "helmlearn", version, about = "Learned boundary-to-solution operators for 2D Helmholtz problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an operator, bind it to the query grid and serialize it.
    Learn {
        #[command(flatten)]
        common: Common,
        /// Archive path (default: <output dir>/operator.bin).
        #[arg(long)]
        operator: Option<PathBuf>,
    },
    /// Apply a serialized operator to boundary data (`x,y,re,im` CSV).
    Solve {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        boundary: PathBuf,
        /// Config whose field is used as the reference solution.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Learn, apply and compare with the exact field.
    Case {
        #[command(flatten)]
        common: Common,
        /// Use this serialized operator instead of learning one.
        #[arg(long)]
        operator: Option<PathBuf>,
    },
    /// Repeat a case over the values of one parameter and fit the error decay.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the continuation radius of the configured field.
    EstimateRho {
        #[command(flatten)]
        common: Common,
        /// Number of equiangular samples (power of two).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Convergence of direct fundamental-solution fits over an `M` sweep.
    BenchMfs {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config and the environment variable.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    sources: Option<usize>,
    #[arg(long)]
    collocation: Option<usize>,
    #[arg(long)]
    source_radius: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    target_count: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(k) = self.k {
            cfg.problem.k = Some(k);
            cfg.problem.frequency_hz = None;
        }
        if let Some(m) = self.sources {
            cfg.problem.sources = m;
        }
        if let Some(n) = self.collocation {
            cfg.problem.collocation = n;
        }
        if let Some(r) = self.source_radius {
            cfg.problem.source_radius = r;
        }
        if let Some(a) = self.alpha {
            cfg.problem.alpha = Some(a);
        }
        if let Some(t) = self.target_count {
            cfg.grid.target_count = t;
        }
        if let Some(dir) = &self.output_dir {
            cfg.output.dir = dir.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn output_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        match &self.output_dir {
            Some(dir) => dir.clone(),
            None => cfg.output_dir(),
        }
    }
}

/// Pins the output directory so later lookups see the command-line choice.
fn resolved(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = common.load()?;
    cfg.output.dir = common.output_dir(&cfg);
    Ok(cfg)
}

fn print_sweep(out: &mut dyn Write, record: &SweepRecord) {
    for row in &record.rows {
        let _ = writeln!(
            out,
            "{:>12} error {:.4e}  M|c|^2 {:.4e}{}",
            if row.param.fract() == 0.0 && row.param.abs() < 1e9 {
                format!("{}", row.param)
            } else {
                format!("{:.4e}", row.param)
            },
            record.metric(row),
            row.scaled_coefficient_norm,
            if row.fitted { "" } else { "  (below floor)" }
        );
    }
    match (&record.fit, &record.fit_error) {
        (Some(fit), _) => {
            let _ = writeln!(out, "fit: rate {:.4} per unit, r^2 {:.4}, {} samples", fit.rate, fit.r_squared, fit.samples);
        }
        (None, Some(e)) => {
            let _ = writeln!(out, "fit unavailable: {e}");
        }
        _ => {}
    }
    let _ = writeln!(out, "coefficient spread {:.3}", record.coefficient_spread);
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Learn { common, operator } => {
            let mut cfg = resolved(&common)?;
            cfg.operator = None;
            let path = operator.unwrap_or_else(|| cfg.output.dir.join("operator.bin"));
            let t = learn_to_archive(&cfg, &path)?;
            let _ = writeln!(out, "learned in {:.3} s, wrote {}", t.learn_s, path.display());
        }
        Command::Solve { operator, boundary, config, output_dir } => {
            let cfg = config.as_deref().map(ExperimentConfig::load).transpose()?;
            let reference = match &cfg {
                Some(c) => Some(c.field.build(c.problem.wavenumber()?)),
                None => None,
            };
            let dir = output_dir
                .or_else(|| cfg.as_ref().map(|c| c.output_dir()))
                .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).filter(|d| !d.is_empty()).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            let rec = solve_from_archive(&operator, &boundary, reference.as_ref(), &dir)?;
            let _ = write!(out, "applied to {} points in {:.3e} s", rec.queries.len(), rec.timings.apply_s);
            if let Some(r) = rec.report {
                let _ = write!(out, "; two-norm {:.4e}, inf-norm {:.4e}", r.two_norm, r.inf_norm);
            }
            let _ = writeln!(out);
        }
        Command::Case { common, operator } => {
            let mut cfg = resolved(&common)?;
            if operator.is_some() {
                cfg.operator = operator;
            }
            let rec = run_case(&cfg)?;
            let _ = writeln!(
                out,
                "{} points: two-norm {:.4e}, inf-norm {:.4e}; learn {:.3} s, apply {:.3e} s",
                rec.report.point_count, rec.report.two_norm, rec.report.inf_norm, rec.timings.learn_s, rec.timings.apply_s
            );
        }
        Command::Sweep { common } => {
            let rec = run_sweep(&resolved(&common)?)?;
            print_sweep(out, &rec);
        }
        Command::BenchMfs { common } => {
            let rec = run_mfs_bench(&resolved(&common)?)?;
            print_sweep(out, &rec);
        }
        Command::EstimateRho { common, count } => {
            let mut cfg = resolved(&common)?;
            if let Some(count) = count {
                cfg.rho.get_or_insert_with(Default::default).count = count;
            }
            let rec = run_estimate_rho(&cfg)?;
            let _ = writeln!(out, "rho {:.4} (rate {:.4}, r^2 {:.4})", rec.rho, rec.rate, rec.r_squared);
        }
    }
    Ok(())
}

/// Runs the command line; returns the process exit code (2 for usage errors,
/// 1 for failures).
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli, &mut std::io::stdout()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
