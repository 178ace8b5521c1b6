//! Verification harness: runs the suites of `hypdef-core` checks over
//! seeded samples and reports the results as JSON or text.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Overrides, SuiteConfig, SUITES};
pub use report::{emit, exit_code, CheckReport, Detail, Format, Status};
pub use suites::run_suite;
