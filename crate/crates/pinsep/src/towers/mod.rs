//! Towers `A ⊆ B ⊆ C`: the three legs, the auxiliary rings `B[C^{p^e}]`, and
//! instance checks of the tower and composition statements, each conclusion
//! recomputed directly.

pub mod tower;

pub use tower::{
    composition_check, exponent2_characterization, exponent_one_tower_check, galois_composition_check, pi_galois_check,
    thm_c_check, tower_report, Auxiliary, CheckStatus, LegSummary, Named, TheoremCheck, TowerData, TowerReport,
    TowerSpec,
};
