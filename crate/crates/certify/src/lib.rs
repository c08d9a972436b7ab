//! Certificate driver for the 3D Hénon map: runs the covering and
//! hyperbolicity checks from `hyperchaos-core`, assembles a JSON proof
//! report, and derives periodic-orbit consequences from a passing report.

pub mod commands;
pub mod report;

pub use commands::{build_report, RunOptions};
pub use report::ProofReport;
