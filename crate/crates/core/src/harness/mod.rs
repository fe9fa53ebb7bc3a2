//! Generators, experiment runner, property checks and the command line.

pub mod cli;
pub mod experiment;
pub mod generators;
pub mod props;
