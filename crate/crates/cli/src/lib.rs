//! Library surface of the command-line front end, split out so integration
//! tests can parse configs and drive runs in-process.

pub mod config;
pub mod run;
