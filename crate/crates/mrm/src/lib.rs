//! File formats, result tables and the command-line front end for the
//! matching solvers in `mrm-core`.

pub mod bench;
pub mod cli;
pub mod files;
pub mod results;
pub mod tasks;
