//! Configuration, experiment sweeps and report formats around
//! [`edgemarket_core`], plus the `edgemarket` command-line front end.

pub mod cli;
pub mod config;
pub mod format;
pub mod report;
pub mod sweep;

pub use config::{Config, ConfigError, PriceMethod, SolverConfig};
pub use report::{run_check, run_oracle, run_solve, CheckReport, OracleReport, SolveReport};
pub use sweep::{run_sweep, SweepRow, SweepSpec};

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NO_CONVERGENCE: i32 = 3;
    pub const CONDITIONS_VIOLATED: i32 = 4;
}
