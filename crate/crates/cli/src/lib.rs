//! Batch command line and HTTP service over `polyassoc-core`.

pub mod analysis;
pub mod commands;
pub mod server;
