//! Homological algebra of 2-modules over a discrete ring, in the strict chain
//! model: a 2-module is a two-term complex `d: A1 → A0` of finitely presented
//! modules over Z or Z/n.

pub mod cochain;
pub mod cohomology;
pub mod derived;
pub mod error;
pub mod exactness;
pub mod generate;
pub mod intmod;
pub mod oracle;
pub mod relkc;
pub mod resolution;
pub mod twomod;

pub use error::{Error, Result};
