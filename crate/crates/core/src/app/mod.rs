//! File-based pipeline behind the `pbscen` command line tool.

pub mod commands;
pub mod config;
pub mod io;

pub use commands::{
    cmd_copula, cmd_density_grid, cmd_fit, cmd_qq, cmd_simulate, cmd_var, prepare, CommandOutput,
    Prepared,
};
pub use config::{AxisRange, ColumnRef, GridConfig, RunConfig};
pub use io::{load_csv, parse_csv, write_atomic, Dataset};
