use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_chain, FiniteAlgebra, Subalgebra};
use crate::diffcalc::{kaehler, KaehlerRoute, OpSpace, PrincipalParts, TensorSquare};
use crate::error::{Error, Result};
use crate::exactla::Subspace;
use crate::jbcorr::composition_closure;
use crate::modules::CModule;

use super::leg::{cotangent, f_extension_of_chain, has_exponent_one, is_galois, pi_of_chain, LegLabel};
use super::report::Verdict;

/// `Hom_A(C, C)` inside `Hom_k(C, C)` together with its left `C`-module.
pub struct EndData {
    pub space: OpSpace,
    pub hom: Subspace,
    pub module: CModule,
}

impl EndData {
    pub fn new(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<Self> {
        let space = OpSpace::endomorphisms(c);
        let hom = space.hom_over(a);
        let module = space.left_module().submodule(&hom)?;
        Ok(EndData { space, hom, module })
    }

    /// A subspace of `Hom_A(C, C)` in the coordinates of `module`.
    pub fn coords(&self, s: &Subspace) -> Result<Subspace> {
        let vs = s
            .basis()
            .iter()
            .map(|v| {
                self.hom
                    .coords(v)
                    .ok_or_else(|| Error::structural("operator is not A-linear"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(self.space.fp(), self.hom.dim(), vs))
    }

    /// Nakayama criterion over local `C` with free `End`, a retraction otherwise.
    pub fn is_summand(&self, s: &Subspace) -> Result<bool> {
        let local = self.coords(s)?;
        match self.module.summand_criterion(&local)? {
            Some(b) => Ok(b),
            None => Ok(self.module.is_direct_summand(&local)?.is_some()),
        }
    }
}

fn c_free_over(c: &FiniteAlgebra, a: &Subalgebra) -> Result<bool> {
    let w = Subalgebra::whole(c);
    Ok(CModule::of_subalgebra_pair(c, &w, a)?.is_free()?.is_some())
}

/// `End_A(C) = C[Der_A(C)]`, by closing multiplications and derivations under
/// composition.
pub fn der_generates_end(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<bool> {
    let end = EndData::new(c.clone(), a)?;
    let closure = der_closure(&end, a)?;
    Ok(c_free_over(&c, a)? && closure == end.hom)
}

fn der_closure(end: &EndData, a: &Subalgebra) -> Result<Subspace> {
    let space = &end.space;
    let c = space.algebra();
    let der = space.derivations(a);
    let der_gens: Vec<Vec<u32>> = if c.is_local() {
        let m = space.left_module().submodule(&der)?;
        m.minimal_generators()?.iter().map(|v| der.combine(v)).collect()
    } else {
        der.basis().to_vec()
    };
    let mut gens: Vec<_> = c.generators().iter().map(|g| c.mul_matrix(g)).collect();
    gens.extend(der_gens.iter().map(|v| space.to_matrix(v)));
    Ok(composition_closure(space, &gens))
}

/// `C` free over `A` and `Der_A(C)` a `C`-direct summand of `End_A(C)`.
pub fn der_summand(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<bool> {
    if !c_free_over(&c, a)? {
        return Ok(false);
    }
    let end = EndData::new(c, a)?;
    let der = end.space.derivations(a);
    end.is_summand(&der)
}

/// A p-basis from `Omega_{C/A}` (quotient route): when free, the generators of
/// `C` whose differentials span `Omega / m Omega`, verified as a p-basis.
pub fn find_pbasis(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<Option<Vec<Vec<u32>>>> {
    let w = Subalgebra::whole(&c);
    if !has_exponent_one(&c, &w, a) {
        return Err(Error::precondition("extension has exponent greater than one"));
    }
    let om = kaehler(c.clone(), a, KaehlerRoute::Quotient)?;
    if om.module.is_free()?.is_none() {
        return Ok(None);
    }
    let diffs: Vec<Vec<u32>> = c.generators().iter().map(|g| om.differential(g)).collect();
    let chosen = om.module.minimal_generators_from(&diffs, None)?;
    // chosen keeps candidate order; equal generators contribute once
    let mut rest = chosen.iter().peekable();
    let mut xs = Vec::with_capacity(chosen.len());
    for (g, d) in c.generators().iter().zip(&diffs) {
        if rest.peek() == Some(&d) {
            xs.push(g.clone());
            rest.next();
        }
    }
    if !super::leg::is_pbasis(&c, &w, a, &xs)? {
        return Err(Error::structural(
            "free differentials whose generators are not a p-basis",
        ));
    }
    Ok(Some(xs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisBattery {
    pub galois: Verdict,
    pub pbasis: Verdict,
    pub omega_projective: Verdict,
    pub end_generated_by_der: Verdict,
    pub der_summand: Verdict,
    pub agree: bool,
}

/// The characterizations of exponent-one Galois extensions, each computed by
/// its own route.
pub fn galois_battery(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<GaloisBattery> {
    let w = Subalgebra::whole(&c);
    if !has_exponent_one(&c, &w, a) {
        return Err(Error::precondition("extension has exponent greater than one"));
    }
    let galois = is_galois(&c, &w, a)?.report.verdict;
    let pbasis = find_pbasis(c.clone(), a)?.is_some().into();
    let om = kaehler(c.clone(), a, KaehlerRoute::Quotient)?;
    let omega_projective: Verdict = om.module.is_free()?.is_some().into();
    let end_generated_by_der: Verdict = der_generates_end(c.clone(), a)?.into();
    let der_summand: Verdict = der_summand(c, a)?.into();
    let all = [galois, pbasis, omega_projective, end_generated_by_der, der_summand];
    Ok(GaloisBattery {
        galois,
        pbasis,
        omega_projective,
        end_generated_by_der,
        der_summand,
        agree: all.iter().all(|&v| v == galois),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub id: u8,
    pub statement: String,
    pub verdict: Verdict,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremAReport {
    pub exponent: Option<usize>,
    pub order_range: Option<usize>,
    pub conditions: Vec<Condition>,
    /// All computed verdicts coincide.
    pub agree: bool,
}

/// Default size limit for the principal-parts and operator conditions.
pub const THEOREM_A_MAX_DIM: usize = 30;

const STATEMENTS: [&str; 5] = [
    "A ⊂ C is purely inseparable",
    "P^k is projective for all k",
    "P^(p^e) is projective for all e < exp",
    "F-extension and Diff^k is a summand of End for all k",
    "F-extension and Diff^(p^e) is a summand of End for all e < exp",
];

fn condition(id: u8, verdict: Verdict, detail: Option<String>) -> Condition {
    Condition {
        id,
        statement: STATEMENTS[id as usize - 1].to_string(),
        verdict,
        detail,
    }
}

/// The five conditions on `A ⊂ C`, each evaluated independently.
pub fn theorem_a(c: Arc<FiniteAlgebra>, a: &Subalgebra, max_dim: usize) -> Result<TheoremAReport> {
    let w = Subalgebra::whole(&c);
    let label = LegLabel::default();
    let chain = frobenius_chain(&c, &w, a)?;
    let Some(exp) = chain.exponent else {
        let conditions = (1..=5)
            .map(|i| condition(i, Verdict::NotApplicable, Some("infinite exponent".into())))
            .collect();
        return Ok(TheoremAReport {
            exponent: None,
            order_range: None,
            conditions,
            agree: true,
        });
    };
    let c1 = pi_of_chain(&c, &chain, &label)?;
    let mut conditions = vec![condition(1, c1.verdict, c1.witness.clone())];
    if c.dim() > max_dim || !c.is_local() {
        let why = if c.is_local() {
            format!("skipped: dim {} above the limit {max_dim}", c.dim())
        } else {
            "skipped: algebra is not local".to_string()
        };
        for i in 2..=5 {
            conditions.push(condition(i, Verdict::NotApplicable, Some(why.clone())));
        }
        return Ok(TheoremAReport {
            exponent: Some(exp),
            order_range: None,
            conditions,
            agree: true,
        });
    }
    let space = OpSpace::endomorphisms(c.clone());
    let kmax = space.order_limit(exp);
    let p = c.p() as usize;
    let pe: Vec<usize> = (0..exp).map(|e| p.pow(e as u32)).collect();

    // (2), (3): principal parts
    let square = TensorSquare::general(c.clone(), a);
    let powers = square.ideal_powers(kmax + 1);
    let stable = (1..=kmax + 1)
        .find(|&k| k < kmax + 1 && powers[k + 1] == powers[k])
        .map(|k| k - 1)
        .unwrap_or(kmax)
        .min(kmax);
    let mut pp_free = Vec::with_capacity(stable + 1);
    for k in 0..=stable {
        let pp = PrincipalParts::from_power(&square, k, &powers[k + 1])?;
        pp_free.push(pp.module.is_free()?.is_some());
    }
    let pp_at = |k: usize| pp_free[k.min(stable)];
    let fail2 = (0..=stable).find(|&k| !pp_free[k]);
    conditions.push(condition(
        2,
        fail2.is_none().into(),
        fail2.map(|k| format!("P^{k} is not projective")),
    ));
    let fail3 = pe.iter().copied().find(|&k| !pp_at(k));
    conditions.push(condition(
        3,
        fail3.is_none().into(),
        fail3.map(|k| format!("P^{k} is not projective")),
    ));

    // (4), (5): operators, only meaningful on top of the F-extension property
    let f = f_extension_of_chain(&c, &w, &chain, &label)?;
    if !f.verdict.is_true() {
        let why = f.witness.clone().unwrap_or_else(|| "not an F-extension".into());
        conditions.push(condition(4, Verdict::False, Some(why.clone())));
        conditions.push(condition(5, Verdict::False, Some(why)));
    } else {
        let end = EndData::new(c.clone(), a)?;
        let diff = space.diff_bracket(a, kmax);
        let mut summand = Vec::with_capacity(diff.len());
        for (k, d) in diff.iter().enumerate() {
            if k > 0 && *d == diff[k - 1] {
                let last = summand[k - 1];
                summand.push(last);
            } else {
                summand.push(end.is_summand(d)?);
            }
        }
        let fail4 = (0..summand.len()).find(|&k| !summand[k]);
        conditions.push(condition(
            4,
            fail4.is_none().into(),
            fail4.map(|k| format!("Diff^{k} is not a summand of End")),
        ));
        let fail5 = pe.iter().copied().find(|&k| !summand[k.min(summand.len() - 1)]);
        conditions.push(condition(
            5,
            fail5.is_none().into(),
            fail5.map(|k| format!("Diff^{k} is not a summand of End")),
        ));
    }
    let first = conditions[0].verdict;
    let agree = conditions.iter().all(|x| x.verdict == first);
    Ok(TheoremAReport {
        exponent: Some(exp),
        order_range: Some(kmax),
        conditions,
        agree,
    })
}

/// Minimal generator count of `C` over `A` (the `r` used for order bounds).
pub fn generator_count(c: &FiniteAlgebra, a: &Subalgebra) -> Result<usize> {
    Ok(cotangent(c, &Subalgebra::whole(c), a)?.len())
}
