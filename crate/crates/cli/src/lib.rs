//! Report-producing commands behind the `permpoly` binary.

pub mod commands;
pub mod record;

pub use record::{overall, Record, Status};
