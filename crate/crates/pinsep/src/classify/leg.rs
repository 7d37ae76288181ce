use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_chain, ChainSummary, FiniteAlgebra, FrobeniusChain, Subalgebra};
use crate::diffcalc::truncated_omega;
use crate::error::{Error, Result};
use crate::exactla::{Echelon, SparseCols, Subspace};
use crate::modules::CModule;

use super::report::Verdict;

/// Names used when rendering witnesses, e.g. `A[C⁹]` for level 2 at p = 3.
#[derive(Clone, Debug)]
pub struct LegLabel {
    pub top: String,
    pub base: String,
}

impl LegLabel {
    pub fn new(top: &str, base: &str) -> Self {
        LegLabel {
            top: top.to_string(),
            base: base.to_string(),
        }
    }

    pub fn level(&self, p: u32, e: usize) -> String {
        match e {
            0 => self.top.clone(),
            _ => format!(
                "{}[{}{}]",
                self.base,
                self.top,
                superscript((p as u64).saturating_pow(e as u32))
            ),
        }
    }
}

fn superscript(n: u64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

impl Default for LegLabel {
    fn default() -> Self {
        LegLabel::new("C", "A")
    }
}

/// Smallest ideal of `top` containing `seeds`, in owner coordinates.
pub fn ideal_closure(c: &FiniteAlgebra, top: &Subalgebra, seeds: &[Vec<u32>]) -> Subspace {
    let ops: Vec<SparseCols> = top.generators().iter().map(|g| c.mul_operator(g)).collect();
    let mut ech = Echelon::new(c.fp(), c.dim());
    let mut queue: Vec<Vec<u32>> = Vec::new();
    for s in seeds {
        if ech.insert(s.clone()) {
            queue.push(s.clone());
        }
    }
    let mut head = 0;
    while head < queue.len() {
        for op in &ops {
            let w = op.apply(&queue[head]);
            if ech.insert(w.clone()) {
                queue.push(w);
            }
        }
        head += 1;
    }
    ech.finish()
}

/// Minimal algebra generators of `top` over `base` for a local owner: the
/// designated generators of `top` whose classes are independent in
/// `m_T / (m_T^2 + m_S T)`.
#[derive(Clone, Debug)]
pub struct Cotangent {
    pub generators: Vec<Vec<u32>>,
    /// `m_T^2 + m_S T`.
    pub relations: Subspace,
}

impl Cotangent {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn centered(c: &FiniteAlgebra, x: &[u32]) -> Vec<u32> {
    c.shift(x, c.residue(x).unwrap_or(0))
}

pub fn cotangent(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> Result<Cotangent> {
    c.require_local()?;
    if !top.contains_subalgebra(base) {
        return Err(Error::precondition("base is not contained in the top algebra"));
    }
    let gens: Vec<Vec<u32>> = top.generators().to_vec();
    let shifted: Vec<Vec<u32>> = gens.iter().map(|g| centered(c, g)).collect();
    let mut seeds = Vec::new();
    for a in 0..shifted.len() {
        for b in a..shifted.len() {
            seeds.push(c.mul(&shifted[a], &shifted[b]));
        }
    }
    seeds.extend(base.generators().iter().map(|s| centered(c, s)));
    let relations = ideal_closure(c, top, &seeds);
    let mut ech = Echelon::from_subspace(&relations);
    let mut out = Vec::new();
    for (g, s) in gens.iter().zip(&shifted) {
        if ech.insert(s.clone()) {
            out.push(g.clone());
        }
    }
    if ech.dim() + 1 != top.dim() {
        return Err(Error::precondition(
            "designated generators do not generate the top algebra over the base",
        ));
    }
    Ok(Cotangent {
        generators: out,
        relations,
    })
}

/// Exponent at most one: every generator of `top` has its p-th power in `base`.
pub fn has_exponent_one(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> bool {
    top.generators().iter().all(|g| base.contains(&c.frobenius_power(g, 1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisReport {
    pub verdict: Verdict,
    pub top_dim: usize,
    pub base_dim: usize,
    /// Size of a minimal generating set.
    pub generators: usize,
    pub pbasis: Option<Vec<String>>,
    pub omega_dim: usize,
    pub witness: Option<String>,
}

/// Outcome of [`is_galois`] with the p-basis as vectors.
#[derive(Clone, Debug)]
pub struct GaloisTest {
    pub report: GaloisReport,
    pub pbasis: Option<Vec<Vec<u32>>>,
}

fn is_power_of(p: usize, mut n: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Galois test for an exponent-one leg: `Omega_{T/S}` free over `T`, with the
/// minimal generators as p-basis witness.
pub fn is_galois(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> Result<GaloisTest> {
    if !has_exponent_one(c, top, base) {
        return Err(Error::precondition("extension has exponent greater than one"));
    }
    let cot = cotangent(c, top, base)?;
    let t = truncated_omega(c, top, base, &cot.generators)?;
    let free = t.is_free();
    if free != t.is_pbasis() {
        return Err(Error::structural(
            "free differentials without a p-basis on minimal generators",
        ));
    }
    let p = c.p() as usize;
    let ratio_ok = top.dim().is_multiple_of(base.dim()) && is_power_of(p, top.dim() / base.dim());
    if free && !ratio_ok {
        return Err(Error::structural("Galois leg whose rank is not a power of p"));
    }
    let witness = if free {
        None
    } else if !top.dim().is_multiple_of(base.dim()) {
        Some(format!("dim {} is not a multiple of dim {}", top.dim(), base.dim()))
    } else if !ratio_ok {
        Some(format!("rank {} is not a power of {p}", top.dim() / base.dim()))
    } else {
        Some(format!(
            "differentials have dim {} but {} minimal generators would need {}",
            t.omega_dim,
            cot.len(),
            cot.len() * top.dim()
        ))
    };
    let pbasis = free.then(|| cot.generators.clone());
    Ok(GaloisTest {
        report: GaloisReport {
            verdict: free.into(),
            top_dim: top.dim(),
            base_dim: base.dim(),
            generators: cot.len(),
            pbasis: pbasis.as_ref().map(|b| b.iter().map(|x| c.format_element(x)).collect()),
            omega_dim: t.omega_dim,
            witness,
        },
        pbasis,
    })
}

/// Whether the monomials of `xs` form a `base`-basis of `top`.
pub fn is_pbasis(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra, xs: &[Vec<u32>]) -> Result<bool> {
    for x in xs {
        if !top.contains(x) {
            return Err(Error::precondition("candidate outside the top algebra"));
        }
        if !base.contains(&c.frobenius_power(x, 1)) {
            return Err(Error::precondition("p-th power of a candidate lies outside the base"));
        }
    }
    Ok(truncated_omega(c, top, base, xs)?.is_pbasis())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FReport {
    pub verdict: Verdict,
    pub chain: ChainSummary,
    /// Per level `e`, whether the top is free over `C^[e]`.
    pub free: Vec<bool>,
    pub failing_level: Option<usize>,
    /// `(dim C^[e], dim top)` at the failing level.
    pub failing_dims: Option<(usize, usize)>,
    pub witness: Option<String>,
}

/// `top` free over every level of its Frobenius chain over `base`.
pub fn is_f_extension(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra, label: &LegLabel) -> Result<FReport> {
    let chain = frobenius_chain(c, top, base)?;
    f_extension_of_chain(c, top, &chain, label)
}

pub(crate) fn f_extension_of_chain(
    c: &FiniteAlgebra,
    top: &Subalgebra,
    chain: &FrobeniusChain,
    label: &LegLabel,
) -> Result<FReport> {
    let summary = ChainSummary::from(chain);
    if chain.exponent.is_none() {
        return Ok(FReport {
            verdict: Verdict::NotApplicable,
            chain: summary,
            free: Vec::new(),
            failing_level: None,
            failing_dims: None,
            witness: Some("infinite exponent".into()),
        });
    }
    let mut free = Vec::with_capacity(chain.levels.len());
    let mut failing = None;
    let mut witness = None;
    for (e, level) in chain.levels.iter().enumerate() {
        let ok = if !top.dim().is_multiple_of(level.dim()) {
            false
        } else {
            CModule::of_subalgebra_pair(c, top, level)?.is_free()?.is_some()
        };
        free.push(ok);
        if !ok && failing.is_none() {
            failing = Some(e);
            witness = Some(if !top.dim().is_multiple_of(level.dim()) {
                format!(
                    "{} is not free over {}: dim {} ∤ {}",
                    label.top,
                    label.level(c.p(), e),
                    level.dim(),
                    top.dim()
                )
            } else {
                format!("{} is not free over {}", label.top, label.level(c.p(), e))
            });
        }
    }
    Ok(FReport {
        verdict: failing.is_none().into(),
        chain: summary,
        free,
        failing_level: failing,
        failing_dims: failing.map(|e| (chain.levels[e].dim(), top.dim())),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiReport {
    pub verdict: Verdict,
    pub chain: ChainSummary,
    /// Leg `C^[e+1] ⊂ C^[e]` for each `e` below the exponent.
    pub legs: Vec<GaloisReport>,
    pub failing_level: Option<usize>,
    pub witness: Option<String>,
}

/// Every step of the Frobenius chain is Galois.
pub fn is_purely_inseparable(
    c: &FiniteAlgebra,
    top: &Subalgebra,
    base: &Subalgebra,
    label: &LegLabel,
) -> Result<PiReport> {
    let chain = frobenius_chain(c, top, base)?;
    pi_of_chain(c, &chain, label)
}

pub(crate) fn pi_of_chain(c: &FiniteAlgebra, chain: &FrobeniusChain, label: &LegLabel) -> Result<PiReport> {
    let summary = ChainSummary::from(chain);
    let Some(exp) = chain.exponent else {
        return Ok(PiReport {
            verdict: Verdict::NotApplicable,
            chain: summary,
            legs: Vec::new(),
            failing_level: None,
            witness: Some("infinite exponent".into()),
        });
    };
    let mut legs = Vec::with_capacity(exp);
    let mut failing = None;
    let mut witness = None;
    for e in 0..exp {
        let g = is_galois(c, &chain.levels[e], &chain.levels[e + 1])?;
        if g.report.verdict.is_false() && failing.is_none() {
            failing = Some(e);
            witness = Some(format!(
                "{} ⊂ {} is not Galois: dim {} = {}, dim {} = {}; {}",
                label.level(c.p(), e + 1),
                label.level(c.p(), e),
                label.level(c.p(), e),
                chain.levels[e].dim(),
                label.level(c.p(), e + 1),
                chain.levels[e + 1].dim(),
                g.report.witness.clone().unwrap_or_default()
            ));
        }
        legs.push(g.report);
    }
    Ok(PiReport {
        verdict: failing.is_none().into(),
        chain: summary,
        legs,
        failing_level: failing,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub fiber_dim: usize,
    pub f_extension: Verdict,
    pub fiber_purely_inseparable: Verdict,
    pub purely_inseparable: Verdict,
    /// `p.i. <=> F-extension and p.i. fiber`.
    pub criterion_holds: bool,
}

/// The fiber `T / m_S T` as an algebra over `S / m_S = F_p`.
pub fn fiber_algebra(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> Result<FiniteAlgebra> {
    c.require_local()?;
    let seeds: Vec<Vec<u32>> = base.generators().iter().map(|s| centered(c, s)).collect();
    let whole = top.dim() == c.dim();
    if seeds.is_empty() {
        return Ok(if whole { c.clone() } else { top.to_algebra(c) });
    }
    let ideal = ideal_closure(c, top, &seeds);
    if whole {
        c.quotient(&ideal)
    } else {
        let t = top.to_algebra(c);
        let local = Subspace::span(c.fp(), top.dim(), ideal.basis().iter().map(|v| top.project(v)));
        t.quotient(&local)
    }
}

pub fn fiber_check(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> Result<FiberReport> {
    let label = LegLabel::default();
    let fiber = fiber_algebra(c, top, base)?;
    let chain = frobenius_chain(c, top, base)?;
    let f = f_extension_of_chain(c, top, &chain, &label)?.verdict;
    let pi = pi_of_chain(c, &chain, &label)?.verdict;
    let fw = Subalgebra::whole(&fiber);
    let fk = Subalgebra::prime_field(&fiber);
    let fpi = is_purely_inseparable(&fiber, &fw, &fk, &label)?.verdict;
    let rhs = f.and(fpi);
    Ok(FiberReport {
        fiber_dim: fiber.dim(),
        f_extension: f,
        fiber_purely_inseparable: fpi,
        purely_inseparable: pi,
        criterion_holds: pi == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{element, presented};

    fn exp_one() -> FiniteAlgebra {
        presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap()
    }

    #[test]
    fn exponent_one_counterexample() {
        let c = exp_one();
        let xy = element(&c, "x*y").unwrap();
        let b = Subalgebra::generated(&c, std::slice::from_ref(&xy), None);
        let k = Subalgebra::prime_field(&c);
        let w = Subalgebra::whole(&c);
        let ab = is_galois(&c, &b, &k).unwrap();
        assert_eq!(ab.report.verdict, Verdict::True);
        assert_eq!(ab.pbasis, Some(vec![xy]));
        let bc = is_galois(&c, &w, &b).unwrap();
        assert_eq!(bc.report.verdict, Verdict::False);
        assert_eq!(fiber_algebra(&c, &w, &b).unwrap().dim(), 3);
        let ac = is_galois(&c, &w, &k).unwrap();
        assert_eq!(ac.report.pbasis.unwrap(), vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn pbasis_checks() {
        let c = exp_one();
        let xy = element(&c, "x*y").unwrap();
        let b = Subalgebra::generated(&c, &[xy], None);
        let w = Subalgebra::whole(&c);
        assert!(!is_pbasis(&c, &w, &b, c.generators()).unwrap());
        let k = Subalgebra::prime_field(&c);
        assert!(is_pbasis(&c, &w, &k, c.generators()).unwrap());
        let d = presented(2, &["x"], &[2], &["0"]).unwrap();
        let wd = Subalgebra::whole(&d);
        let kd = Subalgebra::prime_field(&d);
        assert!(is_pbasis(&d, &wd, &kd, d.generators()).is_err());
    }

    #[test]
    fn composition_counterexample() {
        let c = presented(
            3,
            &["x", "y", "z1", "z2", "z3"],
            &[1, 1, 1, 1, 1],
            &["0", "0", "x^2", "x*y", "y^2"],
        )
        .unwrap();
        let k = Subalgebra::prime_field(&c);
        let w = Subalgebra::whole(&c);
        let x = c.generators()[0].clone();
        let y = c.generators()[1].clone();
        let b = Subalgebra::generated(&c, &[x, y], None);
        assert!(is_galois(&c, &b, &k).unwrap().report.verdict.is_true());
        assert!(is_galois(&c, &w, &b).unwrap().report.verdict.is_true());
        let f = is_f_extension(&c, &w, &k, &LegLabel::default()).unwrap();
        assert_eq!(f.chain.dims, vec![243, 5, 1]);
        assert_eq!(f.verdict, Verdict::False);
        assert_eq!(f.failing_level, Some(1));
        assert!(f.witness.unwrap().contains("dim 5 ∤ 243"));
        let pi = is_purely_inseparable(&c, &w, &k, &LegLabel::default()).unwrap();
        assert_eq!(pi.verdict, Verdict::False);
    }

    #[test]
    fn truncated_line_is_f_extension() {
        let c = presented(3, &["x"], &[2], &["0"]).unwrap();
        let w = Subalgebra::whole(&c);
        let k = Subalgebra::prime_field(&c);
        let f = is_f_extension(&c, &w, &k, &LegLabel::default()).unwrap();
        assert_eq!(f.verdict, Verdict::True);
        assert_eq!(
            is_purely_inseparable(&c, &w, &k, &LegLabel::default()).unwrap().verdict,
            Verdict::True
        );
    }

    #[test]
    fn fiber_over_dual_numbers() {
        // A = F_2[t]/(t^2) ⊂ C = A[x]/(x^2 - t)
        let c = presented(2, &["t", "x"], &[1, 1], &["0", "t"]).unwrap();
        let t = c.generators()[0].clone();
        let a = Subalgebra::generated(&c, &[t], None);
        let w = Subalgebra::whole(&c);
        let r = fiber_check(&c, &w, &a).unwrap();
        assert_eq!(r.fiber_dim, 2);
        assert_eq!(r.f_extension, Verdict::True);
        assert_eq!(r.fiber_purely_inseparable, Verdict::True);
        assert_eq!(r.purely_inseparable, Verdict::True);
        assert!(r.criterion_holds);
    }

    #[test]
    fn level_labels() {
        let l = LegLabel::new("B", "A");
        assert_eq!(l.level(3, 1), "A[B³]");
        assert_eq!(l.level(3, 3), "A[B²⁷]");
        assert_eq!(l.level(3, 0), "B");
    }
}
