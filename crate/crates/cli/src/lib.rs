//! Command-line front end for `sphereframe`: file formats and commands.

pub mod commands;
pub mod error;
pub mod files;
