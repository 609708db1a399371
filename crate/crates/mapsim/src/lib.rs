//! Batch front end for `mapsim-core`: run configurations, CSV and SVG
//! output, and the reference grid of eleven architectures under the two
//! standard parameter configurations.

pub mod cli;
pub mod config;
mod error;
pub mod formats;
pub mod suite;
pub mod svg;

pub use error::HarnessError;
