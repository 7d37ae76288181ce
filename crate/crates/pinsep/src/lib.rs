//! Exact F_p computations for extensions of finite commutative algebras of
//! characteristic p: Frobenius chains, Galois and purely inseparable tests,
//! principal parts, differential operators and the endomorphism correspondence.

pub mod algebra;
pub mod classify;
pub mod cli;
pub mod diffcalc;
pub mod error;
pub mod exactla;
pub mod jbcorr;
pub mod modules;
pub mod towers;

pub use error::{Error, Result};
