//! The `orbas` command line: repository management plus pattern search.
//!
//! Exit codes: 0 success, 1 usage error, 2 corrupt repository, 3 I/O failure.

pub mod app;
pub mod args;
pub mod render;

pub use app::run;
pub use args::{Cli, Command};
