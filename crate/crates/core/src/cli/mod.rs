//! Run configurations, result rows and the batch driver behind the
//! `entanglab` binary.

pub mod config;
pub mod output;
pub mod row;
pub mod run;

pub use config::{
    set_sweep_parameter, FlavorChoice, OutputFormat, OutputSpec, RunConfig, RunTolerances,
    SolverConfig, SweepSpec,
};
pub use output::write_atomic;
pub use row::{render_rows, ResultRow, CSV_HEADER};
pub use run::{run, status_code, RunOutcome};
