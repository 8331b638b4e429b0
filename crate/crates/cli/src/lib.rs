//! Command-line front end for `leibniz-moment`: the JSON algebra and extension file
//! formats, report assembly and rendering, and the `leibniz` argument parser.

pub mod algebra_file;
pub mod cli;
pub mod error;
pub mod extension_file;
pub mod names;
pub mod report;
pub mod text;

pub use cli::{run, Cli};
pub use error::CliError;
