//! Exact dense linear algebra over prime fields.
//!
//! Everything here is deterministic: reduced echelon forms are unique, kernels
//! are ordered by free column and solutions set free variables to zero.

pub mod field;
mod gf2;
pub mod matrix;
pub mod subspace;

pub use field::{Fp, FpScalar};
pub use matrix::{FpMatrix, Rref};
pub use subspace::{to_sparse, unit, Echelon, SparseCols, Subspace};
