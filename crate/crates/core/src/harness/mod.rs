//! Experiment runner: TOML configs, case and sweep orchestration, and the
//! CSV/JSON artifacts they leave behind.

mod case;
mod cli;
mod config;
mod output;
mod sweep;

pub use case::{
    learn_to_archive, read_boundary, run_case, solve_from_archive, write_boundary, write_fields, ResolvedProblem,
    RunRecord, RunTimings, SolveRecord, APPLY_REPEATS,
};
pub use cli::cli_main;
pub use config::{
    EvaluationSet, ExperimentConfig, FieldConfig, GridConfig, OutputConfig, ProblemConfig, RhoConfig, SweepConfig,
    SweepMethod, SweepParameter, OUTPUT_DIR_ENV,
};
pub use output::{float, to_json, write_csv, write_json};
pub use sweep::{run_estimate_rho, run_mfs_bench, run_sweep, RhoRecord, SweepRecord, SweepRow};
