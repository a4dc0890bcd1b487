//! Command-line front end, file formats and verification suites built on
//! `genmarkov-core`.

pub mod app;
pub mod format;
pub mod harness;

pub use app::{run_cli, Outcome};
pub use harness::{run_suite, Bounds, ViolationReport};
