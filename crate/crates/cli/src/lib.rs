//! Command-line and HTTP front ends for `jfy-core`.

pub mod commands;
pub mod server;
