//! Experiment runner behind the `lipopt` command.

pub mod campaign;
pub mod cli;
pub mod config;
pub mod output;
pub mod studies;
