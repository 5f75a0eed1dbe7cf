//! JSON formats, parallel verification, SVG rendering and the command-line
//! front end for `ford-rank1-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod invariants;
pub mod parallel;
pub mod render;

pub use error::CliError;
