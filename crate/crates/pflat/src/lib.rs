//! File format, JSON reports, SVG drawing and the command-line front end
//! for [`pflat_core`].

pub mod cli;
pub mod format;
pub mod report;
pub mod svg;

pub use format::{parse_surface, serialize_surface, ParseError, Parsed};
