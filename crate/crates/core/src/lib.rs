//! Bigraph folds, cut-percolation certificates and homomorphism-density
//! inequality testing over finite step bigraphons.

pub mod automorphism;
pub mod bigraph;
pub mod checkers;
pub mod cli;
pub mod density;
pub mod error;
pub mod fold;
pub mod fractional;
pub mod percolation;
pub mod reflection;
pub mod testers;

pub use bigraph::{Bigraph, ColoredBigraph, Flag};
pub use error::{Error, Result};
pub use fold::Fold;
