//! Batch front end: JSON job in, JSON report out.

pub mod encode;
pub mod exec;
pub mod job;
pub mod report;
pub mod schema;

pub use exec::{execute, parse_error, Options};
pub use job::{Command, JobSpec};
pub use report::{Check, Report, Status};
