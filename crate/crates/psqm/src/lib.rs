//! Command-line front end for `psqm-core`: protocol runs, verification
//! suites, bound computations and random-function statistics, all emitted as
//! canonical JSON reports.

pub mod cli;
pub mod commands;
pub mod report;
pub mod table_io;

pub use cli::{main_with_args, ExitStatus};
pub use report::{Check, Report};
