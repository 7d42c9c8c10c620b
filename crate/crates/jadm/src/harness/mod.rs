//! Experiment support: instance generation with known ground truth,
//! finite-difference and grid-search oracles, file formats and the bench
//! runner behind the command-line interface.

mod bench;
mod instance;
mod io;
mod oracle;
mod suite;

pub use bench::{run_trials, AlgoKind, BenchSpec, SolverSettings, TrialSummary};
pub use instance::{factor_rsl, generate_instance, random_joint_point, InstanceSpec};
pub use io::{
    parse_config_file, read_point, read_problem, write_point, write_problem, write_report,
    write_trace_csv, trace_csv_string, RunReport,
};
pub use oracle::{
    central_diff, fd_gradient_table, grid_min_2d, grid_min_log_1d, plane_grid_min,
    reference_cost, triangular_grid_min, GridResult, PairingRow,
};
pub use suite::{oracle_suite, SuiteOutcome};

pub use bench::run_algo;
