//! A numerical matrix-analysis laboratory for convexity and concavity
//! inequalities of Hermitian operators: compressions, matrix functions,
//! contractions, expansive operators, eigenvalue dominance with witness
//! unitaries, and randomized falsification searches for the statements
//! that fail.

pub mod dominance;
pub mod error;
pub mod instances;
pub mod numerics;
pub mod opcalc;
pub mod scalarfn;
pub mod theorems;

pub use error::{Error, Result};
