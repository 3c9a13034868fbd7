//! IO, file formats, parallel execution and the `percolab` command line on
//! top of [`percolab_core`].

pub mod cli;
pub mod formats;
pub mod runner;
pub mod verify;

pub use percolab_core as core;
