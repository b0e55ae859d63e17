//! Command-line front end for the multiverse privacy model.
//!
//! The decision model, simulation engine, and statistics all live in
//! `mpt-core`; this crate adds the operational shell around them:
//!
//! - [`config`]: TOML run configs with defaults, validation, and seed
//!   resolution;
//! - [`csvio`]: the trajectory CSV format (writer and strict parser) plus
//!   the analysis side-tables;
//! - [`manifest`]: the JSON run manifest written next to every output;
//! - [`commands`]: the five subcommands wired together from the above;
//! - [`error`]: the process-level error type and its exit-code mapping.
//!
//! Exit codes: 0 on success, 1 for invalid input (flags, config, data),
//! 2 for I/O failures.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod manifest;
