//! Meandric systems, the infinite noodle, and bounds on the constant κ
//! governing the number of loops of a uniform meandric system.
//!
//! Module overview:
//! - [`words`]: `{L,R}` words and their non-crossing partial matchings.
//! - [`systems`]: pairs of matchings, components, shapes.
//! - [`enumeration`]: exhaustive meanders, open shapes and faces.
//! - [`sampling`]: seeded samplers, the lazy noodle, Monte Carlo estimators.
//! - [`kappa`]: truncated series bounds in exact dyadic arithmetic.
//! - [`nclattice`]: non-crossing partitions and Hasse distances.
//! - [`cli`]: the `noodle` command line tool.

pub mod cli;
pub(crate) mod dsu;
pub mod enumeration;
pub mod error;
pub mod kappa;
pub mod nclattice;
pub mod sampling;
pub mod systems;
pub mod words;

pub use error::{Error, Result};
