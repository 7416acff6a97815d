//! Command-line front end for the `srd-core` library: bound curves,
//! verification suites, recovery simulations, CSV and SVG output.

pub mod cli;
pub mod commands;
pub mod error;
pub mod grid;
pub mod output;
pub mod parallel;
pub mod params;
pub mod source;
pub mod svg;
pub mod verify;

pub use error::CliError;
