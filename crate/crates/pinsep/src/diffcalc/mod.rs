//! Differential operators: principal parts, Kähler differentials, the
//! filtration `Diff^k_A(C, M)` and p-basis operators.

pub mod diff;
pub mod extres;
pub mod kaehler;
pub mod ops;
pub mod pbasis;
pub mod tensor;

pub use diff::{diff_bracket, diff_dual, DiffFiltration};
pub use extres::{extension_setup, ExtResCase, ExtensionSetup, RetractionCase};
pub use kaehler::{kaehler, truncated_omega, Kaehler, KaehlerRoute, TruncatedOmega};
pub use ops::{Bracketer, DiffOperator, OpSpace};
pub use pbasis::{delta_alpha, restrict, MonomialBasis};
pub use tensor::{principal_parts, tensor_square, FreeTensorSquare, PrincipalParts, TensorSquare};
