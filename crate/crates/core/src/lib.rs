//! Computational engine for q-matroids, matrix rank-metric codes and their
//! multilinear representability machinery: finite-field linear algebra,
//! subspace enumeration, rank functions from codes, 3-tensor slice spaces,
//! projectivization, and the exhaustive / analytic non-representability
//! checkers with machine-checkable certificates.

pub mod classical;
pub mod error;
pub mod fixtures;
pub mod gf;
pub mod linalg;
pub mod par;
pub mod qmatroid;
pub mod rmcode;
pub mod subspace;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational rank values.
pub type Rational = num_rational::Ratio<i64>;
