//! The bundled corpus: worked examples first, then randomized instances whose
//! expectations come from `corpus/oracle.py`.

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../corpus/", $name, ".pinsep")))),*]
    };
}

pub const CORPUS: &[(&str, &str)] = corpus![
    "pbasis_dual_numbers",
    "pbasis_two_lines",
    "pbasis_truncated_line",
    "pbasis_none",
    "trivial_modular_extension",
    "exponent_one_counterexample",
    "kxk",
    "composition_counterexample",
    "failed_tower",
    "random_pi_01",
    "random_pi_02",
    "random_pi_03",
    "random_pi_04",
    "random_pi_05",
    "random_pi_06",
    "random_pi_07",
    "random_pi_08",
    "random_pi_09",
    "random_pi_10",
    "random_not_pi_01",
    "random_not_pi_02",
    "random_not_pi_03",
    "random_not_pi_04",
    "random_not_pi_05",
    "random_not_pi_06",
    "random_not_pi_07",
    "random_not_pi_08",
    "random_not_pi_09",
];

pub fn get(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
