//! Problem files, command dispatch and report emission for the `pfaff` tool.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use commands::{run_command, run_on_problem, Command, RunOptions};
pub use error::CliError;
pub use problem::{builtin_problem, load_problem, parse_problem, JetSpec, Mode, Problem, StratumSpec};
pub use report::{emit_report, CommandEcho, Format, Report, Verdict};
