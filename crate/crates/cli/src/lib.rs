//! JSON front end for `cliffcomp-core`.

pub mod bundle;
pub mod commands;
pub mod problem;
pub mod report;
pub mod selftest;

pub use commands::{run, Outcome};
