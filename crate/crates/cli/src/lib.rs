//! Command line and HTTP front ends over the synthesizer.

pub mod cli;
pub mod engine;
pub mod server;
