//! Batch runner for Steklov spectrum experiments on pants-glued surfaces.

pub mod config;
pub mod run;

pub use config::{parse_plan, validate_config, Diagnostic, ExperimentConfig, Plan, Point, Surface};
pub use run::{point_mesh, run_experiment, run_point, RunError, RunOptions, RunOutcome};
