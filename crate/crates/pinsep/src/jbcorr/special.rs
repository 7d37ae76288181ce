use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_chain, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, FpMatrix};

use super::end::{EndAlgebra, EndSubalgebra};

/// `φ_1..φ_l` a `C`-basis of `H` and `t_1..t_l` in `C` with `φ_i(t_j) = δ_ij`.
#[derive(Clone, Debug)]
pub struct SpecialBasis {
    pub ts: Vec<Vec<u32>>,
    pub phis: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialBasisSummary {
    pub l: usize,
    pub ts: Vec<String>,
}

impl SpecialBasis {
    pub fn summary(&self, end: &EndAlgebra) -> SpecialBasisSummary {
        SpecialBasisSummary {
            l: self.ts.len(),
            ts: self.ts.iter().map(|t| end.algebra().format_element(t)).collect(),
        }
    }

    /// `φ_i(t_j) = δ_ij` and the `φ_i` generate `H` with `l * dim C = dim H`.
    pub fn verify(&self, end: &EndAlgebra, h: &EndSubalgebra) -> bool {
        let c = end.algebra();
        let l = self.phis.len();
        if self.ts.len() != l || l * c.dim() != h.dim() {
            return false;
        }
        for (i, phi) in self.phis.iter().enumerate() {
            for (j, t) in self.ts.iter().enumerate() {
                let want = if i == j { c.one() } else { c.zero() };
                if end.space().eval(phi, t) != want {
                    return false;
                }
            }
        }
        end.space().left_module().generated(&self.phis) == h.space
    }
}

/// Dual-basis construction for a summand `H`: pick `t_j` whose residues under
/// a `C`-basis of `H` are independent, then change basis by the inverse of the
/// matrix `(φ_i(t_j))`, which is invertible over local `C`.
pub fn special_basis(end: &EndAlgebra, h: &EndSubalgebra) -> Result<SpecialBasis> {
    let c = end.algebra();
    if h.summand.is_none() {
        return Err(Error::precondition("H is not a direct summand of End_A(C)"));
    }
    c.require_local()?;
    let chain = frobenius_chain(c, &Subalgebra::whole(c), end.base())?;
    if chain.exponent.is_none() {
        return Err(Error::precondition("not finite exponent"));
    }
    let fp = c.fp();
    let d = c.dim();
    let module = end.space().left_module().submodule(&h.space)?;
    let phis: Vec<Vec<u32>> = module
        .minimal_generators()?
        .iter()
        .map(|v| h.space.combine(v))
        .collect();
    let l = phis.len();
    if l * d != h.dim() {
        return Err(Error::precondition("H is not free over C"));
    }
    let residue = |t: &[u32]| -> Vec<u32> {
        phis.iter()
            .map(|phi| c.residue(&end.space().eval(phi, t)).unwrap_or(0))
            .collect()
    };
    let mut ech = Echelon::new(fp, l);
    let mut ts: Vec<Vec<u32>> = Vec::with_capacity(l);
    for s in 0..d {
        if ts.len() == l {
            break;
        }
        let t = c.basis_vector(s);
        if ech.insert(residue(&t)) {
            ts.push(t);
        }
    }
    if ts.len() < l {
        return Err(Error::precondition("residues of H do not separate C"));
    }
    // ψ_i = Σ_k n_ik φ_k with Σ_k n_ik φ_k(t_j) = δ_ij; unknowns (k, basis b)
    let values: Vec<Vec<Vec<u32>>> = phis
        .iter()
        .map(|phi| ts.iter().map(|t| end.space().eval(phi, t)).collect())
        .collect();
    let mut cols = Vec::with_capacity(l * d);
    for vk in &values {
        for b in 0..d {
            let bv = c.basis_vector(b);
            cols.push(vk.iter().flat_map(|v| c.mul(&bv, v)).collect::<Vec<u32>>());
        }
    }
    let m = FpMatrix::from_columns(fp, l * d, &cols)?;
    let rhs_cols: Vec<Vec<u32>> = (0..l)
        .map(|i| (0..l).flat_map(|j| if i == j { c.one() } else { c.zero() }).collect())
        .collect();
    let rhs = FpMatrix::from_columns(fp, l * d, &rhs_cols)?;
    let sols = m.solve_columns(&rhs)?;
    let mut out = Vec::with_capacity(l);
    for sol in sols {
        let sol = sol.ok_or_else(|| Error::structural("matrix of values is not invertible"))?;
        let mut psi = vec![0u32; end.space().dim()];
        for (k, phi) in phis.iter().enumerate() {
            let n: Vec<u32> = sol[k * d..(k + 1) * d].to_vec();
            let term = end.space().left(&n, phi);
            psi = psi.iter().zip(&term).map(|(&a, &b)| fp.add(a, b)).collect();
        }
        out.push(psi);
    }
    let sb = SpecialBasis { ts, phis: out };
    if !sb.verify(end, h) {
        return Err(Error::structural("special basis failed verification"));
    }
    Ok(sb)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{element, presented};
    use crate::jbcorr::end::end_over;

    #[test]
    fn embedded_algebra_has_identity_basis() {
        let c = Arc::new(presented(2, &["x"], &[1], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let e = EndAlgebra::new(c.clone(), &k).unwrap();
        let h = end_over(&e, &Subalgebra::whole(&c)).unwrap();
        let sb = special_basis(&e, &h).unwrap();
        assert_eq!(sb.ts, vec![c.one()]);
        assert_eq!(sb.phis, vec![e.identity()]);
    }

    #[test]
    fn full_end_of_dual_numbers() {
        let c = Arc::new(presented(2, &["x"], &[1], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let e = EndAlgebra::new(c.clone(), &k).unwrap();
        let h = end_over(&e, &k).unwrap();
        let sb = special_basis(&e, &h).unwrap();
        assert_eq!(sb.summary(&e).ts, vec!["1".to_string(), "x".to_string()]);
    }

    #[test]
    fn truncated_line_over_cubes() {
        let c = Arc::new(presented(3, &["x"], &[2], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let e = EndAlgebra::new(c.clone(), &k).unwrap();
        let b = Subalgebra::generated(&c, &[element(&c, "x^3").unwrap()], None);
        let h = end_over(&e, &b).unwrap();
        let sb = special_basis(&e, &h).unwrap();
        assert_eq!(sb.summary(&e).ts, vec!["1", "x", "x^2"]);
    }
}
