//! Oracle batteries behind the `verify` subcommand and the acceptance suite.

pub mod batteries;
pub mod tolerances;

pub use batteries::{run_all, run_battery, BatteryId, CheckResult};
pub use tolerances::ToleranceSet;
