//! Finite commutative F_p-algebras: presentations, structure constants,
//! subalgebras and the Frobenius chain `C^[e] = A[C^{p^e}]`.

pub mod finite;
pub mod poly;
pub mod presentation;
pub mod subalgebra;

pub use finite::{FiniteAlgebra, Radical, WordBasis, DEFAULT_MAX_DIM};
pub use poly::{parse_poly, Poly, Term};
pub use presentation::Presentation;
pub use subalgebra::{frobenius_chain, ChainSummary, FrobeniusChain, Subalgebra};

use crate::error::Result;
use crate::exactla::Fp;

/// Builds a presented algebra from generator names, exponents `e_i` (the
/// relation is on `x_i^{p^{e_i}}`) and relation right-hand sides.
pub fn presented(p: u32, names: &[&str], exponents: &[u32], relations: &[&str]) -> Result<FiniteAlgebra> {
    let fp = Fp::new(p)?;
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let rels = relations
        .iter()
        .enumerate()
        .map(|(i, r)| parse_poly(fp, r, &names, i + 1, 0))
        .collect::<Result<Vec<_>>>()?;
    let pres = Presentation::new(p, names, exponents.to_vec(), rels)?;
    FiniteAlgebra::from_presentation(&pres, DEFAULT_MAX_DIM)
}

/// Parses a polynomial in the designated generators and evaluates it.
pub fn element(c: &FiniteAlgebra, text: &str) -> Result<Vec<u32>> {
    let poly = parse_poly(c.fp(), text, c.generator_names(), 1, 0)?;
    Ok(evaluate(c, &poly))
}

/// Evaluates a polynomial at the designated generators.
pub fn evaluate(c: &FiniteAlgebra, poly: &Poly) -> Vec<u32> {
    let mut acc = c.zero();
    for t in poly.terms.iter().filter(|t| t.coeff != 0) {
        let mut m = c.scale(t.coeff, &c.one());
        for (j, &e) in t.exps.iter().enumerate() {
            if e > 0 {
                m = c.mul(&m, &c.pow(&c.generators()[j], e as u64));
            }
        }
        acc = c.add(&acc, &m);
    }
    acc
}
