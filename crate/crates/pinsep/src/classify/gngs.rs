use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_chain, FiniteAlgebra, Poly, Presentation, Subalgebra, Term};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, FpMatrix};

use super::leg::cotangent;

/// A generalized normal generating sequence with its numerics.
#[derive(Clone, Debug)]
pub struct Gngs {
    /// `x_1, ..., x_n` in owner coordinates.
    pub elements: Vec<Vec<u32>>,
    /// `n(0), n(1), ..., n(exp)` with `n(exp) = 0`.
    pub n: Vec<usize>,
    /// `e(1) >= ... >= e(n)`.
    pub e: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GngsSummary {
    pub elements: Vec<String>,
    pub n: Vec<usize>,
    pub e: Vec<usize>,
    pub sum_n: usize,
    pub sum_e: usize,
    pub identity_holds: bool,
    pub defining_inequalities_hold: bool,
}

impl Gngs {
    pub fn sum_n(&self) -> usize {
        self.n.iter().sum()
    }

    pub fn sum_e(&self) -> usize {
        self.e.iter().sum()
    }

    /// `n(e(i)) < i <= n(e(i) - 1)` for every `i` (1-based).
    pub fn defining_inequalities_hold(&self) -> bool {
        self.e.iter().enumerate().all(|(k, &ei)| {
            let i = k + 1;
            let at = self.n.get(ei).copied().unwrap_or(0);
            ei >= 1 && at < i && i <= self.n[ei - 1]
        })
    }

    pub fn summary(&self, c: &FiniteAlgebra) -> GngsSummary {
        GngsSummary {
            elements: self.elements.iter().map(|x| c.format_element(x)).collect(),
            n: self.n.clone(),
            e: self.e.clone(),
            sum_n: self.sum_n(),
            sum_e: self.sum_e(),
            identity_holds: self.sum_n() == self.sum_e(),
            defining_inequalities_hold: self.defining_inequalities_hold(),
        }
    }
}

/// Builds a GNGS of `top` over a local `base`: minimal generators of `top`,
/// reordered from the deepest chain level upwards so that the `p^e`-th powers
/// of the first `n(e)` elements minimally generate `C^[e]`.
pub fn gngs(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> Result<Gngs> {
    let chain = frobenius_chain(c, top, base)?;
    let exp = chain
        .exponent
        .ok_or_else(|| Error::precondition("the extension has infinite exponent"))?;
    let cots = chain
        .levels
        .iter()
        .map(|l| cotangent(c, l, base))
        .collect::<Result<Vec<_>>>()?;
    let n: Vec<usize> = cots.iter().map(|ct| ct.len()).collect();
    let ys = cots[0].generators.clone();
    let mut order: Vec<usize> = Vec::new();
    for e in (0..exp).rev() {
        let powers: Vec<Vec<u32>> = ys.iter().map(|y| c.frobenius_power(y, e as u32)).collect();
        let centered = |v: &[u32]| c.shift(v, c.residue(v).unwrap_or(0));
        let mut ech = Echelon::from_subspace(&cots[e].relations);
        for &i in &order {
            if !ech.insert(centered(&powers[i])) {
                return Err(Error::structural("selected powers became dependent at a lower level"));
            }
        }
        for (i, pw) in powers.iter().enumerate() {
            if order.len() == n[e] {
                break;
            }
            if order.contains(&i) {
                continue;
            }
            if ech.insert(centered(pw)) {
                order.push(i);
            }
        }
        if order.len() != n[e] {
            return Err(Error::structural(
                "powers of the generators do not generate a chain level",
            ));
        }
    }
    let e: Vec<usize> = (1..=order.len())
        .map(|i| n.iter().take_while(|&&ne| ne >= i).count())
        .collect();
    Ok(Gngs {
        elements: order.iter().map(|&i| ys[i].clone()).collect(),
        n,
        e,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgsReport {
    pub isomorphism: bool,
    /// `u_i^(p^e(i)) = P_i`, when every relation could be solved over F_p.
    pub presentation: Option<Vec<String>>,
    pub expected_dim: Option<u64>,
    pub witness: Option<String>,
}

/// Monomial index ranges: `alpha_j < bounds[j]`, encoded little-endian.
fn for_each_multi_index(bounds: &[usize], mut f: impl FnMut(&[usize])) {
    let mut a = vec![0usize; bounds.len()];
    if bounds.contains(&0) {
        return;
    }
    loop {
        f(&a);
        let mut i = 0;
        loop {
            if i == bounds.len() {
                return;
            }
            a[i] += 1;
            if a[i] < bounds[i] {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

fn monomial(c: &FiniteAlgebra, xs: &[Vec<u32>], alpha: &[usize]) -> Vec<u32> {
    let mut m = c.one();
    for (x, &a) in xs.iter().zip(alpha) {
        if a > 0 {
            m = c.mul(&m, &c.pow(x, a as u64));
        }
    }
    m
}

/// Solves `x_i^{p^{e(i)}} = P_i` over the base with degree bounds and checks
/// that the reduced monomials `x^alpha`, `alpha_i < p^{e(i)}`, form a basis
/// over the base.
pub fn ngs_presentation(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra, g: &Gngs) -> Result<NgsReport> {
    let p = c.p() as u64;
    let n = g.elements.len();
    let fp = c.fp();
    let names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    let prime_base = base.dim() == 1;
    let mut relations: Vec<Poly> = Vec::with_capacity(n);
    for i in 0..n {
        let ei = g.e[i] as u32;
        let target = c.frobenius_power(&g.elements[i], ei);
        // earlier generators with larger exponent, raised to p^{e(i)}
        let deps: Vec<usize> = (0..i).filter(|&j| g.e[j] > g.e[i]).collect();
        let raised: Vec<Vec<u32>> = deps.iter().map(|&j| c.frobenius_power(&g.elements[j], ei)).collect();
        let bounds: Vec<usize> = deps.iter().map(|&j| p.pow((g.e[j] - g.e[i]) as u32) as usize).collect();
        let mut alphas: Vec<Vec<usize>> = Vec::new();
        let mut cols: Vec<Vec<u32>> = Vec::new();
        for_each_multi_index(&bounds, |a| {
            let m = monomial(c, &raised, a);
            for s in base.basis() {
                cols.push(c.mul(s, &m));
                alphas.push(a.to_vec());
            }
        });
        let mat = FpMatrix::from_columns(fp, c.dim(), &cols)?;
        let Some(sol) = mat.solve(&target)? else {
            return Ok(NgsReport {
                isomorphism: false,
                presentation: None,
                expected_dim: None,
                witness: Some(format!(
                    "x_{}^{} has no expression in the earlier generators",
                    i + 1,
                    p.pow(ei)
                )),
            });
        };
        if prime_base {
            let terms = sol
                .iter()
                .zip(&alphas)
                .filter(|(&s, _)| s != 0)
                .map(|(&s, a)| {
                    let mut exps = vec![0u32; n];
                    for (k, &j) in deps.iter().enumerate() {
                        exps[j] = (a[k] as u64 * p.pow(ei)) as u32;
                    }
                    Term { coeff: s, exps }
                })
                .collect();
            relations.push(Poly { nvars: n, terms });
        }
    }
    let expected = p
        .checked_pow(g.sum_e() as u32)
        .and_then(|q| q.checked_mul(base.dim() as u64));
    let presentation = if prime_base && n > 0 {
        let exps: Vec<u32> = g.e.iter().map(|&e| e as u32).collect();
        Some(Presentation::new(c.p(), names, exps, relations)?.format())
    } else if prime_base {
        Some(Vec::new())
    } else {
        None
    };
    if expected != Some(top.dim() as u64) {
        return Ok(NgsReport {
            isomorphism: false,
            presentation,
            expected_dim: expected,
            witness: Some(format!(
                "p^(sum e(i)) * dim A = {} but dim C = {}",
                expected.map(|d| d.to_string()).unwrap_or_else(|| "overflow".into()),
                top.dim()
            )),
        });
    }
    let bounds: Vec<usize> = g.e.iter().map(|&e| p.pow(e as u32) as usize).collect();
    let mut ech = Echelon::new(fp, c.dim());
    let mut independent = true;
    for_each_multi_index(&bounds, |a| {
        if !independent {
            return;
        }
        let m = monomial(c, &g.elements, a);
        for s in base.basis() {
            if !ech.insert(c.mul(s, &m)) {
                independent = false;
                return;
            }
        }
    });
    Ok(NgsReport {
        isomorphism: independent,
        presentation,
        expected_dim: expected,
        witness: (!independent).then(|| "reduced monomials are dependent over the base".to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presented;

    #[test]
    fn truncated_two_generators() {
        let c = presented(3, &["x1", "x2"], &[2, 1], &["0", "0"]).unwrap();
        let w = Subalgebra::whole(&c);
        let k = Subalgebra::prime_field(&c);
        let g = gngs(&c, &w, &k).unwrap();
        assert_eq!(g.n, vec![2, 1, 0]);
        assert_eq!(g.e, vec![2, 1]);
        assert_eq!(g.sum_n(), 3);
        assert!(g.defining_inequalities_hold());
        let r = ngs_presentation(&c, &w, &k, &g).unwrap();
        assert!(r.isomorphism);
        assert_eq!(
            r.presentation.unwrap(),
            vec!["u1^9 = 0".to_string(), "u2^3 = 0".to_string()]
        );
    }

    #[test]
    fn trivial_extension_has_empty_sequence() {
        let c = presented(2, &["x"], &[1], &["0"]).unwrap();
        let w = Subalgebra::whole(&c);
        let g = gngs(&c, &w, &w).unwrap();
        assert!(g.elements.is_empty());
        assert_eq!(g.n, vec![0]);
        assert!(ngs_presentation(&c, &w, &w, &g).unwrap().isomorphism);
    }

    #[test]
    fn non_free_leg_fails() {
        let c = presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap();
        let xy = crate::algebra::element(&c, "x*y").unwrap();
        let b = Subalgebra::generated(&c, &[xy], None);
        let w = Subalgebra::whole(&c);
        let g = gngs(&c, &w, &b).unwrap();
        assert_eq!(g.n, vec![2, 0]);
        assert!(!ngs_presentation(&c, &w, &b, &g).unwrap().isomorphism);
    }
}
