//! Manifest loading and command dispatch for the `hom2` binary.

pub mod manifest;
pub mod run;

pub use manifest::{Manifest, Workspace};
pub use run::{exit_code_for, render, run, Outcome, Overrides};
