//! File formats and the command-line front end for `azx-core`.

pub mod circuit;
pub mod cli;
pub mod json;

pub use cli::{run, Outcome};
