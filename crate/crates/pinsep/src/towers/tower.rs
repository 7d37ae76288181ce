use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_chain, FiniteAlgebra, Subalgebra};
use crate::classify::leg::{f_extension_of_chain, pi_of_chain};
use crate::classify::{has_exponent_one, is_galois, LegLabel, Verdict};
use crate::error::{Error, Result};
use crate::modules::CModule;

/// `A ⊆ B ⊆ C` inside an owner algebra, with containments verified.
#[derive(Clone, Debug)]
pub struct TowerSpec<'a> {
    pub c: &'a FiniteAlgebra,
    pub top: Subalgebra,
    pub a: Subalgebra,
    pub b: Subalgebra,
}

impl<'a> TowerSpec<'a> {
    pub fn new(c: &'a FiniteAlgebra, top: Subalgebra, a: Subalgebra, b: Subalgebra) -> Result<Self> {
        if !b.contains_subalgebra(&a) {
            return Err(Error::precondition("A is not contained in B"));
        }
        if !top.contains_subalgebra(&b) {
            return Err(Error::precondition("B is not contained in C"));
        }
        Ok(TowerSpec { c, top, a, b })
    }

    /// `C` is the whole owner algebra.
    pub fn whole(c: &'a FiniteAlgebra, a: Subalgebra, b: Subalgebra) -> Result<Self> {
        Self::new(c, Subalgebra::whole(c), a, b)
    }
}

/// Classification of one leg `S ⊂ T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegSummary {
    pub name: String,
    pub top_dim: usize,
    pub base_dim: usize,
    pub exponent: Option<usize>,
    pub chain: Vec<usize>,
    pub galois: Verdict,
    pub pbasis: Option<Vec<String>>,
    pub f_extension: Verdict,
    pub f_failing_level: Option<usize>,
    pub f_failing_dims: Option<(usize, usize)>,
    pub purely_inseparable: Verdict,
    pub witness: Option<String>,
}

impl LegSummary {
    /// One-line human rendering.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "{}: {}",
            self.name,
            if self.purely_inseparable.is_true() {
                "purely inseparable"
            } else if self.purely_inseparable.is_false() {
                "not purely inseparable"
            } else {
                "purely inseparable not applicable"
            }
        );
        if let (Some(e), Some((l, t))) = (self.f_failing_level, self.f_failing_dims) {
            let why = if t % l != 0 {
                format!("dim {l} ∤ {t}")
            } else {
                "not free".to_string()
            };
            s.push_str(&format!("; F-extension fails at e={e} ({why})"));
        }
        s
    }
}

fn classify_leg(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra, label: &LegLabel) -> Result<LegSummary> {
    let chain = frobenius_chain(c, top, base)?;
    let f = f_extension_of_chain(c, top, &chain, label)?;
    let pi = pi_of_chain(c, &chain, label)?;
    let (galois, pbasis) = match chain.exponent {
        None => (Verdict::NotApplicable, None),
        Some(_) if !has_exponent_one(c, top, base) => (Verdict::False, None),
        Some(_) => {
            let g = is_galois(c, top, base)?;
            (g.report.verdict, g.report.pbasis)
        }
    };
    Ok(LegSummary {
        name: format!("{}⊂{}", label.base, label.top),
        top_dim: top.dim(),
        base_dim: base.dim(),
        exponent: chain.exponent,
        chain: chain.dims(),
        galois,
        pbasis,
        f_extension: f.verdict,
        f_failing_level: f.failing_level,
        f_failing_dims: f.failing_dims,
        purely_inseparable: pi.verdict,
        witness: pi.witness.or(f.witness),
    })
}

/// `A ⊂ B[C^{p^e}]` for one `e >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Auxiliary {
    pub e: usize,
    pub dim: usize,
    pub f_extension: Verdict,
    pub purely_inseparable: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    /// Preconditions of the statement fail.
    NotApplicable,
    /// Hypotheses fail; nothing is asserted.
    HypothesesFail,
    /// Hypotheses hold and the recomputed conclusion holds.
    Verified,
    /// Hypotheses hold and the recomputed conclusion fails.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Named {
    pub name: String,
    pub verdict: Verdict,
}

fn named(name: impl Into<String>, verdict: Verdict) -> Named {
    Named {
        name: name.into(),
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub statement: String,
    pub status: CheckStatus,
    pub reason: Option<String>,
    pub hypotheses: Vec<Named>,
    pub conclusion: Vec<Named>,
}

impl TheoremCheck {
    fn not_applicable(statement: &str, reason: impl Into<String>) -> Self {
        TheoremCheck {
            statement: statement.into(),
            status: CheckStatus::NotApplicable,
            reason: Some(reason.into()),
            hypotheses: Vec::new(),
            conclusion: Vec::new(),
        }
    }

    fn assess(statement: &str, hypotheses: Vec<Named>, conclusion: impl FnOnce() -> Vec<Named>) -> Self {
        let hold = hypotheses.iter().all(|h| h.verdict.is_true());
        let (status, conclusion) = if hold {
            let c = conclusion();
            let ok = c.iter().all(|x| x.verdict.is_true());
            (
                if ok {
                    CheckStatus::Verified
                } else {
                    CheckStatus::Violated
                },
                c,
            )
        } else {
            (CheckStatus::HypothesesFail, Vec::new())
        };
        let failing: Vec<&str> = hypotheses
            .iter()
            .filter(|h| !h.verdict.is_true())
            .map(|h| h.name.as_str())
            .collect();
        TheoremCheck {
            statement: statement.into(),
            status,
            reason: (!failing.is_empty()).then(|| format!("failing hypotheses: {}", failing.join(", "))),
            hypotheses,
            conclusion,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.status == CheckStatus::Violated
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    /// `A⊂C`, `A⊂B`, `B⊂C`.
    pub legs: Vec<LegSummary>,
    pub auxiliary: Vec<Auxiliary>,
    pub c_free_over_b: bool,
    pub theorems: Vec<TheoremCheck>,
    /// `B = A`: the tower is the single leg `A⊂C`.
    pub single_leg: bool,
}

impl TowerReport {
    pub fn leg(&self, name: &str) -> Option<&LegSummary> {
        self.legs.iter().find(|l| l.name == name)
    }

    pub fn violations(&self) -> Vec<&TheoremCheck> {
        self.theorems.iter().filter(|t| t.is_violation()).collect()
    }
}

/// Leg data shared by the individual checks.
pub struct TowerData<'a> {
    pub spec: &'a TowerSpec<'a>,
    pub ac: LegSummary,
    pub ab: LegSummary,
    pub bc: LegSummary,
    pub auxiliary: Vec<Auxiliary>,
    pub c_free_over_b: bool,
}

impl<'a> TowerData<'a> {
    pub fn new(spec: &'a TowerSpec<'a>) -> Result<Self> {
        let c = spec.c;
        let ac = classify_leg(c, &spec.top, &spec.a, &LegLabel::new("C", "A"))?;
        if ac.exponent.is_none() {
            return Err(Error::precondition("A ⊂ C has infinite exponent"));
        }
        let ab = classify_leg(c, &spec.b, &spec.a, &LegLabel::new("B", "A"))?;
        let bc = classify_leg(c, &spec.top, &spec.b, &LegLabel::new("C", "B"))?;
        let exp_bc = bc.exponent.unwrap_or(0);
        let mut auxiliary = Vec::new();
        let label = LegLabel::new("B[C^p^e]", "A");
        for e in 1..exp_bc.max(2) {
            let seed: Vec<Vec<u32>> = spec
                .top
                .generators()
                .iter()
                .map(|g| c.frobenius_power(g, e as u32))
                .collect();
            let be = Subalgebra::generated(c, &seed, Some(&spec.b));
            let chain = frobenius_chain(c, &be, &spec.a)?;
            auxiliary.push(Auxiliary {
                e,
                dim: be.dim(),
                f_extension: f_extension_of_chain(c, &be, &chain, &label)?.verdict,
                purely_inseparable: pi_of_chain(c, &chain, &label)?.verdict,
            });
        }
        let c_free_over_b = CModule::of_subalgebra_pair(c, &spec.top, &spec.b)?.is_free()?.is_some();
        Ok(TowerData {
            spec,
            ac,
            ab,
            bc,
            auxiliary,
            c_free_over_b,
        })
    }

    fn aux(&self, e: usize) -> Option<&Auxiliary> {
        self.auxiliary.iter().find(|x| x.e == e)
    }
}

const THM_C: &str = "A⊂C p.i., B⊂C and A⊂B F-extensions, A⊂B[C^p] F-extension ⟹ tower p.i. and A⊂B[C^p] p.i.";
const COR_EXP2: &str = "exp(C/A) = 2, A⊂C p.i.: tower p.i. ⟺ A⊂B and B⊂C F-extensions";
const LEMMA_GALOIS: &str = "A⊂B and B⊂C Galois: A⊂C p.i. ⟺ A⊂C F-extension";
const PROP_PI_GALOIS: &str = "A⊂B p.i. and B⊂C Galois: A⊂C p.i. ⟺ A⊂C F-extension";
const COR_COMPOSITION: &str = "A⊂B, B⊂C p.i. and A⊂B[C^(p^k)] F-extensions for 0 ≤ k < exp(C/B) ⟹ A⊂C p.i.";
const PROP_EXP1: &str = "A⊂C p.i. of exponent one, C projective over B ⟹ B⊂C and A⊂B Galois";

fn iff(name: &str, l: Verdict, r: Verdict) -> Named {
    named(name, (l == r).into())
}

pub fn thm_c_check(t: &TowerData) -> TheoremCheck {
    if !t.ac.purely_inseparable.is_true() {
        return TheoremCheck::not_applicable(THM_C, "A⊂C is not purely inseparable");
    }
    let aux1 = t.aux(1);
    let hyps = vec![
        named("B⊂C F-extension", t.bc.f_extension),
        named("A⊂B F-extension", t.ab.f_extension),
        named(
            "A⊂B[C^p] F-extension",
            aux1.map(|a| a.f_extension).unwrap_or(Verdict::NotApplicable),
        ),
    ];
    TheoremCheck::assess(THM_C, hyps, || {
        vec![
            named("A⊂B p.i.", t.ab.purely_inseparable),
            named("B⊂C p.i.", t.bc.purely_inseparable),
            named(
                "A⊂B[C^p] p.i.",
                aux1.map(|a| a.purely_inseparable).unwrap_or(Verdict::NotApplicable),
            ),
        ]
    })
}

pub fn exponent2_characterization(t: &TowerData) -> TheoremCheck {
    if t.ac.exponent != Some(2) {
        return TheoremCheck::not_applicable(COR_EXP2, "exponent of A⊂C is not 2");
    }
    if !t.ac.purely_inseparable.is_true() {
        return TheoremCheck::not_applicable(COR_EXP2, "A⊂C is not purely inseparable");
    }
    let lhs = t.ab.purely_inseparable.and(t.bc.purely_inseparable);
    let rhs = t.ab.f_extension.and(t.bc.f_extension);
    TheoremCheck::assess(COR_EXP2, Vec::new(), || {
        vec![
            named("tower p.i.", lhs),
            named("A⊂B and B⊂C F-extensions", rhs),
            iff("biconditional", lhs, rhs),
        ]
    })
    .with_biconditional()
}

pub fn galois_composition_check(t: &TowerData) -> TheoremCheck {
    let hyps = vec![named("A⊂B Galois", t.ab.galois), named("B⊂C Galois", t.bc.galois)];
    TheoremCheck::assess(LEMMA_GALOIS, hyps, || {
        vec![iff(
            "A⊂C p.i. ⟺ A⊂C F-extension",
            t.ac.purely_inseparable,
            t.ac.f_extension,
        )]
    })
}

pub fn pi_galois_check(t: &TowerData) -> TheoremCheck {
    let hyps = vec![
        named("A⊂B p.i.", t.ab.purely_inseparable),
        named("B⊂C Galois", t.bc.galois),
    ];
    TheoremCheck::assess(PROP_PI_GALOIS, hyps, || {
        vec![iff(
            "A⊂C p.i. ⟺ A⊂C F-extension",
            t.ac.purely_inseparable,
            t.ac.f_extension,
        )]
    })
}

pub fn composition_check(t: &TowerData) -> TheoremCheck {
    if !(t.ab.purely_inseparable.is_true() && t.bc.purely_inseparable.is_true()) {
        return TheoremCheck::not_applicable(COR_COMPOSITION, "A⊂B and B⊂C are not both purely inseparable");
    }
    let exp_bc = t.bc.exponent.unwrap_or(0);
    // k = 0 is A⊂C itself; without it the statement fails on two Galois legs
    let hyps = (0..exp_bc)
        .map(|k| {
            let v = match k {
                0 => t.ac.f_extension,
                _ => t.aux(k).map(|a| a.f_extension).unwrap_or(Verdict::NotApplicable),
            };
            named(format!("A⊂B[C^(p^{k})] F-extension"), v)
        })
        .collect();
    let mut check = TheoremCheck::assess(COR_COMPOSITION, hyps, || {
        vec![named("A⊂C p.i.", t.ac.purely_inseparable)]
    });
    if check.status == CheckStatus::HypothesesFail {
        check.conclusion = vec![named("A⊂C p.i. (not asserted)", t.ac.purely_inseparable)];
    }
    check
}

pub fn exponent_one_tower_check(t: &TowerData) -> TheoremCheck {
    if t.ac.exponent.is_none_or(|e| e > 1) {
        return TheoremCheck::not_applicable(PROP_EXP1, "exponent of A⊂C is not at most one");
    }
    let hyps = vec![
        named("A⊂C p.i.", t.ac.purely_inseparable),
        named("C projective over B", t.c_free_over_b.into()),
    ];
    TheoremCheck::assess(PROP_EXP1, hyps, || {
        vec![named("B⊂C Galois", t.bc.galois), named("A⊂B Galois", t.ab.galois)]
    })
}

impl TheoremCheck {
    /// For biconditionals only the equivalence is asserted.
    fn with_biconditional(mut self) -> Self {
        if self.status == CheckStatus::Violated {
            let ok = self.conclusion.last().is_some_and(|x| x.verdict.is_true());
            if ok {
                self.status = CheckStatus::Verified;
            }
        }
        self
    }
}

/// All legs, auxiliaries and theorem checks for `A ⊆ B ⊆ C`.
pub fn tower_report(spec: &TowerSpec) -> Result<TowerReport> {
    let t = TowerData::new(spec)?;
    let theorems = vec![
        thm_c_check(&t),
        exponent2_characterization(&t),
        galois_composition_check(&t),
        pi_galois_check(&t),
        composition_check(&t),
        exponent_one_tower_check(&t),
    ];
    Ok(TowerReport {
        legs: vec![t.ac.clone(), t.ab.clone(), t.bc.clone()],
        auxiliary: t.auxiliary.clone(),
        c_free_over_b: t.c_free_over_b,
        theorems,
        single_leg: spec.a == spec.b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{element, presented};

    fn sub(c: &FiniteAlgebra, gens: &[&str]) -> Subalgebra {
        let v: Vec<Vec<u32>> = gens.iter().map(|g| element(c, g).unwrap()).collect();
        Subalgebra::generated(c, &v, None)
    }

    #[test]
    fn exponent_two_truncated_line() {
        let c = presented(2, &["x"], &[2], &["0"]).unwrap();
        let k = Subalgebra::prime_field(&c);
        let spec = TowerSpec::whole(&c, k.clone(), sub(&c, &["x^2"])).unwrap();
        let t = TowerData::new(&spec).unwrap();
        let chk = exponent2_characterization(&t);
        assert_eq!(chk.status, CheckStatus::Verified);
        assert!(chk.conclusion.iter().all(|x| x.verdict.is_true()));
        assert_eq!(thm_c_check(&t).status, CheckStatus::Verified);
    }

    #[test]
    fn exponent_two_oracle_for_x2_plus_x3() {
        // B = k[x^2 + x^3]: C is free over B (basis 1, x) but B[C^2] = span{1, x^2, x^3}
        // has dim 3, so B ⊂ C is not an F-extension and the tower is not p.i.
        let c = presented(2, &["x"], &[2], &["0"]).unwrap();
        let k = Subalgebra::prime_field(&c);
        let b = sub(&c, &["x^2 + x^3"]);
        assert_eq!(b.dim(), 2);
        let spec = TowerSpec::whole(&c, k, b).unwrap();
        let t = TowerData::new(&spec).unwrap();
        assert!(t.c_free_over_b);
        assert_eq!(t.bc.f_extension, Verdict::False);
        assert_eq!(t.bc.f_failing_dims, Some((3, 4)));
        assert_eq!(t.ab.purely_inseparable, Verdict::True);
        let chk = exponent2_characterization(&t);
        assert_eq!(chk.status, CheckStatus::Verified);
        assert_eq!(chk.conclusion[0].verdict, Verdict::False);
        assert_eq!(chk.conclusion[1].verdict, Verdict::False);
    }

    #[test]
    fn trivial_tower_collapses() {
        let c = presented(3, &["x"], &[2], &["0"]).unwrap();
        let k = Subalgebra::prime_field(&c);
        let spec = TowerSpec::whole(&c, k.clone(), k).unwrap();
        let r = tower_report(&spec).unwrap();
        assert!(r.single_leg);
        assert_eq!(r.legs[0].purely_inseparable, Verdict::True);
        assert_eq!(r.legs[1].exponent, Some(0));
        assert!(r.violations().is_empty());
        assert_eq!(r.theorems[0].status, CheckStatus::Verified);
    }

    #[test]
    fn exponent_one_counterexample_tower() {
        let c = presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap();
        let k = Subalgebra::prime_field(&c);
        let spec = TowerSpec::whole(&c, k, sub(&c, &["x*y"])).unwrap();
        let r = tower_report(&spec).unwrap();
        assert_eq!(r.leg("A⊂B").unwrap().galois, Verdict::True);
        assert_eq!(r.leg("A⊂B").unwrap().pbasis, Some(vec!["x*y".to_string()]));
        assert_eq!(r.leg("B⊂C").unwrap().galois, Verdict::False);
        assert!(!r.c_free_over_b);
        assert!(r.violations().is_empty());
    }
}
