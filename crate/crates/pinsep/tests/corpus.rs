use std::time::Instant;

use pinsep::algebra::DEFAULT_MAX_DIM;
use pinsep::cli::corpus::CORPUS;
use pinsep::cli::selftest;

#[test]
fn bundled_corpus_passes_every_property() {
    let mut failures = Vec::new();
    for entry in CORPUS {
        let t = Instant::now();
        let r = selftest(&[*entry], None, DEFAULT_MAX_DIM).unwrap();
        eprintln!("{:<32} {:>4} cases {:>8.2?}", entry.0, r.cases.len(), t.elapsed());
        for c in r.cases.iter().filter(|c| !c.passed) {
            failures.push(format!("{} {}: {:?}", c.instance, c.property, c.detail));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
