//! The correspondence between intermediate rings `A ⊆ B ⊆ C` with `C`
//! projective over `B` and unital summand subalgebras `H ⊆ End_A(C)`.

pub mod correspondence;
pub mod end;
pub mod special;

pub use correspondence::{
    enumerate_subalgebras, kxk_demo, not_projective, verify_correspondence, EndCheck, JbReport, RingCheck,
    ENUMERATION_MAX_DIM,
};
pub use end::{
    close_subalgebra, composition_closure, constants_of, end_over, EndAlgebra, EndSubalgebra, EndSubalgebraFlags,
};
pub use special::{special_basis, SpecialBasis, SpecialBasisSummary};
