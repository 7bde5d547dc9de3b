//! File format, run reports and the `braidmono` command line.

pub mod commands;
pub mod io;
mod json;
pub mod report;

pub use commands::{run, Outcome};
pub use io::{load_category, load_functor, CategoryFile, FunctorFile, LoadError};
pub use report::{OutputFormat, RunReport};
