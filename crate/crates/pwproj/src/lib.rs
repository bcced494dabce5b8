//! File formats, configuration, the marriage campaign and the command line
//! on top of `pwproj-core`.

pub mod bundle;
pub mod campaign;
pub mod cli;
pub mod config;
pub mod format;
pub mod sample;
pub mod text;
