use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_chain, FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{Fp, FpMatrix};
use crate::modules::CModule;

use super::end::{close_subalgebra, constants_of, end_over, EndAlgebra, EndSubalgebra, EndSubalgebraFlags};

/// Largest dimension for which every intermediate subalgebra is enumerated.
pub const ENUMERATION_MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingCheck {
    pub name: String,
    pub dim: usize,
    pub included: bool,
    pub reason: Option<String>,
    pub end_dim: Option<usize>,
    pub roundtrip: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndCheck {
    pub name: String,
    pub flags: EndSubalgebraFlags,
    pub included: bool,
    pub reason: Option<String>,
    pub constants: Vec<String>,
    pub constants_dim: usize,
    pub roundtrip: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JbReport {
    /// How the homeomorphic-spectra hypothesis is tested.
    pub surrogate: String,
    pub hypothesis_holds: bool,
    pub hypothesis_flag: Option<String>,
    pub end_dim: usize,
    pub rings: Vec<RingCheck>,
    pub endomorphisms: Vec<EndCheck>,
    /// Distinct `H` with the same ring of constants.
    pub collisions: Vec<(String, String)>,
    pub violations: Vec<String>,
}

impl JbReport {
    pub fn roundtrips_exact(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs both roundtrips on the candidates and records every failure.
pub fn verify_correspondence(
    end: &EndAlgebra,
    rings: &[(String, Subalgebra)],
    endos: &[(String, EndSubalgebra)],
) -> Result<JbReport> {
    let c = end.algebra();
    let whole = Subalgebra::whole(c);
    let finite = frobenius_chain(c, &whole, end.base())?.exponent.is_some();
    let mut violations = Vec::new();
    let mut ring_checks = Vec::with_capacity(rings.len());
    for (name, b) in rings {
        let mut check = RingCheck {
            name: name.clone(),
            dim: b.dim(),
            included: false,
            reason: None,
            end_dim: None,
            roundtrip: None,
        };
        if !b.contains_subalgebra(end.base()) {
            check.reason = Some("B does not contain A".into());
        } else if let Some(reason) = not_projective(c, &whole, b)? {
            check.reason = Some(reason.into());
        } else {
            let h = end_over(end, b)?;
            let back = constants_of(end, &h)?;
            let ok = back == *b;
            if !ok {
                violations.push(format!("constants of End_{name}(C) differ from {name}"));
            }
            check.included = true;
            check.end_dim = Some(h.dim());
            check.roundtrip = Some(ok);
        }
        ring_checks.push(check);
    }
    let mut end_checks = Vec::with_capacity(endos.len());
    let mut constants: Vec<Subalgebra> = Vec::with_capacity(endos.len());
    for (name, h) in endos {
        let b = constants_of(end, h)?;
        let mut check = EndCheck {
            name: name.clone(),
            flags: h.flags(),
            included: false,
            reason: None,
            constants: b.format(c),
            constants_dim: b.dim(),
            roundtrip: None,
        };
        if !h.is_admissible() {
            check.reason = Some("H is not a unital summand subalgebra".into());
        } else {
            let back = end_over(end, &b)?;
            let ok = back.space == h.space;
            if !ok {
                violations.push(format!("End over the constants of {name} differs from {name}"));
            }
            check.included = true;
            check.roundtrip = Some(ok);
        }
        end_checks.push(check);
        constants.push(b);
    }
    let mut collisions = Vec::new();
    for i in 0..endos.len() {
        for j in i + 1..endos.len() {
            if constants[i] == constants[j] && endos[i].1.space != endos[j].1.space {
                collisions.push((endos[i].0.clone(), endos[j].0.clone()));
            }
        }
    }
    Ok(JbReport {
        surrogate: "finite exponent".into(),
        hypothesis_holds: finite,
        hypothesis_flag: (!finite).then(|| "not finite exponent".to_string()),
        end_dim: end.dim(),
        rings: ring_checks,
        endomorphisms: end_checks,
        collisions,
        violations,
    })
}

/// Why `C` is excluded as a module over `B`, if it is. Over a non-local `B`
/// only `B = C` is decided.
pub fn not_projective(c: &FiniteAlgebra, whole: &Subalgebra, b: &Subalgebra) -> Result<Option<&'static str>> {
    if b == whole {
        return Ok(None);
    }
    match CModule::of_subalgebra_pair(c, whole, b)?.is_free() {
        Ok(Some(_)) => Ok(None),
        Ok(None) => Ok(Some("C not projective over B")),
        Err(Error::NotLocal { .. }) => Ok(Some("B is not local")),
        Err(e) => Err(e),
    }
}

/// Every unital subalgebra `A ⊆ B ⊆ C`, by adjoining one coset
/// representative at a time, in (dimension, echelon basis) order.
pub fn enumerate_subalgebras(c: &FiniteAlgebra, a: &Subalgebra) -> Result<Vec<Subalgebra>> {
    if c.dim() > ENUMERATION_MAX_DIM {
        return Err(Error::Resource(format!(
            "subalgebra enumeration needs dim C <= {ENUMERATION_MAX_DIM}, got {}",
            c.dim()
        )));
    }
    let p = c.p();
    let key = |s: &Subalgebra| (s.dim(), s.basis().to_vec());
    let mut seen: BTreeSet<(usize, Vec<Vec<u32>>)> = BTreeSet::new();
    let mut found: Vec<Subalgebra> = vec![a.clone()];
    seen.insert(key(a));
    let mut head = 0;
    while head < found.len() {
        let s = found[head].clone();
        head += 1;
        let free = s.space().free_columns();
        // nonzero vectors on the free columns with leading coefficient 1
        let n = free.len();
        let total = (p as u64).pow(n as u32);
        for code in 1..total {
            let mut digits = vec![0u32; n];
            let mut x = code;
            for dgt in digits.iter_mut() {
                *dgt = (x % p as u64) as u32;
                x /= p as u64;
            }
            if digits.iter().rev().find(|&&v| v != 0) != Some(&1) {
                continue;
            }
            let mut v = vec![0u32; c.dim()];
            for (&col, &dg) in free.iter().zip(&digits) {
                v[col] = dg;
            }
            let t = Subalgebra::generated(c, &[v], Some(&s));
            if seen.insert(key(&t)) {
                found.push(t);
            }
        }
    }
    found.sort_by_key(key);
    Ok(found)
}

/// The split algebra `F_2 × F_2` over the diagonal, with the upper and lower
/// triangular subalgebras of `End(F_2 × F_2) = M_2(F_2)`.
pub fn kxk_demo() -> Result<JbReport> {
    let (c, end) = kxk()?;
    let mut upper = FpMatrix::zeros(c.fp(), 2, 2);
    upper.set(0, 1, 1);
    let lower = upper.transpose();
    let h1 = close_subalgebra(&end, &[end.space().flatten(&upper)])?;
    let h2 = close_subalgebra(&end, &[end.space().flatten(&lower)])?;
    let k = Subalgebra::prime_field(&c);
    verify_correspondence(&end, &[("K".into(), k)], &[("H1".into(), h1), ("H2".into(), h2)])
}

fn kxk() -> Result<(Arc<FiniteAlgebra>, EndAlgebra)> {
    let fp = Fp::new(2)?;
    let e = |i: usize| {
        let mut v = vec![0u32; 2];
        v[i] = 1;
        v
    };
    let products = vec![vec![e(0), vec![0, 0]], vec![vec![0, 0], e(1)]];
    let c = Arc::new(FiniteAlgebra::from_structure_constants(
        fp,
        vec!["e1".into(), "e2".into()],
        products,
        vec![1, 1],
        vec![e(0)],
        vec!["e1".into()],
    )?);
    let k = Subalgebra::prime_field(&c);
    let end = EndAlgebra::new(c.clone(), &k)?;
    Ok((c, end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presented;

    #[test]
    fn kxk_collision() {
        let r = kxk_demo().unwrap();
        assert_eq!(r.end_dim, 4);
        assert_eq!(r.hypothesis_flag.as_deref(), Some("not finite exponent"));
        assert_eq!(r.endomorphisms[0].flags.dim, 3);
        assert_eq!(r.endomorphisms[1].flags.dim, 3);
        assert!(r.endomorphisms.iter().all(|h| h.flags.summand && h.constants_dim == 1));
        assert_eq!(r.collisions, vec![("H1".to_string(), "H2".to_string())]);
        assert_eq!(r.rings[0].roundtrip, Some(true));
        assert_eq!(r.endomorphisms[0].roundtrip, Some(false));
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn enumeration_of_small_algebras() {
        // F_2[x]/(x^4): k, k[x^2], k[x^3], k[x^2 + x^3], span{1, x^2, x^3}, C
        let c = presented(2, &["x"], &[2], &["0"]).unwrap();
        let k = Subalgebra::prime_field(&c);
        let subs = enumerate_subalgebras(&c, &k).unwrap();
        let dims: Vec<usize> = subs.iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![1, 2, 2, 2, 3, 4]);
        let c = presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap();
        let k = Subalgebra::prime_field(&c);
        let subs = enumerate_subalgebras(&c, &k).unwrap();
        assert!(subs.iter().all(|s| s.contains(&c.one())));
        assert_eq!(subs.first().unwrap().dim(), 1);
        assert_eq!(subs.last().unwrap().dim(), 4);
    }

    #[test]
    fn roundtrips_on_truncated_line() {
        let c = Arc::new(presented(2, &["x"], &[2], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let end = EndAlgebra::new(c.clone(), &k).unwrap();
        let subs = enumerate_subalgebras(&c, &k).unwrap();
        let rings: Vec<(String, Subalgebra)> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("B{i}"), s.clone()))
            .collect();
        let mut endos = Vec::new();
        for (n, b) in &rings {
            endos.push((format!("End_{n}"), end_over(&end, b).unwrap()));
        }
        let r = verify_correspondence(&end, &rings, &endos).unwrap();
        assert!(r.hypothesis_holds);
        assert!(r.roundtrips_exact(), "{:?}", r.violations);
    }
}
