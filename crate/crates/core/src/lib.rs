//! Samplers for invariant measures on countable relational structures, and
//! exact and statistical checks of their uniqueness and multiplicity.

pub mod borel;
pub mod cli;
pub mod error;
pub mod finstruct;
pub mod lemmas;
pub mod measures;
pub mod montecarlo;
pub mod rational;
pub mod reducts;
pub mod typestats;

pub use error::{Error, Result};
