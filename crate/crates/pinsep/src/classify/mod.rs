//! Classification of extensions: p-bases, Galois, F-extensions, purely
//! inseparable extensions, generating sequences and the differential criteria.

pub mod battery;
pub mod gngs;
pub mod leg;
pub mod report;

pub use battery::{
    der_generates_end, der_summand, find_pbasis, galois_battery, theorem_a, EndData, GaloisBattery, TheoremAReport,
    THEOREM_A_MAX_DIM,
};
pub use gngs::{gngs, ngs_presentation, Gngs, GngsSummary, NgsReport};
pub use leg::{
    cotangent, fiber_algebra, fiber_check, has_exponent_one, ideal_closure, is_f_extension, is_galois, is_pbasis,
    is_purely_inseparable, FReport, FiberReport, GaloisReport, GaloisTest, LegLabel, PiReport,
};
pub use report::Verdict;
