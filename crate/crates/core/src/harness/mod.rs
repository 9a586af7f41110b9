//! Experiment drivers: configuration files, the plane-wave reflection study,
//! sigma_max sweeps, the order study and the cost reports.
//!
//! Every CSV written here starts with two provenance lines,
//! `# dgtd-pml <version>` and `# config_hash <sha256>`, followed by a header
//! row. The schemas are listed in `docs/csv.md`.

mod config;
mod experiment;
mod reports;

pub use config::{
    default_sampling, Configuration, DiscretizationConfig, ExperimentConfig, GeometryConfig, OutputConfig, PmlConfig,
    Preset, ProbeConfig, TimeWindow, END_LEVEL, SEPARATION_LEVEL, START_LEVEL,
};
pub use experiment::{
    build_mesh, build_solver, convergence_study, run_reflection_experiment, stretch_profile, sweep_sigma_max,
    ConvergenceRow, ReflectionResult, SweepResult,
};
pub use reports::{
    analytic_memory, memory_report, n_quad, operation_count_report, write_memory_report, write_operation_counts,
    MemoryReport, OperationCounts,
};
