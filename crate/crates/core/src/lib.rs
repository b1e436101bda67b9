//! Graded representations of symmetric groups attached to braid-type
//! algebras, representation-stability patterns, and log-concavity checks.

pub mod cache;
pub mod error;
pub mod linalg;
pub mod gradedrep;
pub mod presentations;
pub mod stability;
pub mod store;
pub mod symcore;
pub mod verifier;

pub use error::{Error, Result};
pub use symcore::{ClassFunction, IrrDecomposition, Partition};
