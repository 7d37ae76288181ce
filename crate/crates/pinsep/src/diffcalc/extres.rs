use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, Subalgebra};
use crate::classify::is_galois;
use crate::error::{Error, Result};
use crate::modules::CModule;

use super::ops::{DiffOperator, OpSpace};
use super::pbasis::{restrict, MonomialBasis};
use super::tensor::{PrincipalParts, TensorSquare};

/// `C` over `B = A[C^p]` with a p-basis, and `Diff_A(B, C)` as an operator space.
#[derive(Clone, Debug)]
pub struct ExtensionSetup {
    pub frobenius: Subalgebra,
    pub basis: MonomialBasis,
    /// `Hom_k(B, C)` with `C` a `B`-module, in the echelon coordinates of `B`.
    pub space: OpSpace,
    /// `A` inside the algebra `B`.
    pub base_in_b: Subalgebra,
    pub base: Subalgebra,
}

/// `C ⊗_B P^k_{B/A} -> P^{pk}_{C/A}`: dimensions and whether the map splits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractionCase {
    pub order: usize,
    pub source_dim: usize,
    pub image_dim: usize,
    pub target_dim: usize,
    pub summand: bool,
}

impl RetractionCase {
    pub fn holds(&self) -> bool {
        self.source_dim == self.image_dim && self.summand
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtResCase {
    pub order: usize,
    pub ext_order: Option<usize>,
    pub bound: usize,
    pub restricts: bool,
}

impl ExtResCase {
    pub fn holds(&self) -> bool {
        self.restricts && self.ext_order.is_some_and(|o| o <= self.bound)
    }
}

/// `Ok(None)` when `C` has no p-basis over `A[C^p]`.
pub fn extension_setup(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<Option<ExtensionSetup>> {
    let w = Subalgebra::whole(&c);
    let seed: Vec<Vec<u32>> = c.generators().iter().map(|g| c.frobenius_power(g, 1)).collect();
    let b = Subalgebra::generated(&c, &seed, Some(a));
    let Some(xs) = is_galois(&c, &w, &b)?.pbasis else {
        return Ok(None);
    };
    let basis = MonomialBasis::new(c.clone(), &b, &xs)?
        .ok_or_else(|| Error::structural("Galois leg without a monomial basis"))?;
    let m = CModule::regular(c.clone()).restrict_scalars(&b)?;
    let space = OpSpace::new(m.ring().clone(), m)?;
    let base_in_b = b.restrict(a)?;
    Ok(Some(ExtensionSetup {
        frobenius: b,
        basis,
        space,
        base_in_b,
        base: a.clone(),
    }))
}

impl ExtensionSetup {
    /// `Diff^k_A(B, C)`, by the bracket route.
    pub fn inner_operators(&self, k: usize) -> Vec<Vec<u32>> {
        self.space.diff_bracket(&self.base_in_b, k)[k].basis().to_vec()
    }

    pub fn extend(&self, inner: &[u32], k: usize) -> Result<DiffOperator> {
        let op = self.space.operator(inner, Some(k));
        let m = CModule::regular(self.basis.algebra().clone());
        self.basis.extend(&m, &op)
    }

    /// `res(ext(d)) = d` and `order(ext(d)) <= p k`.
    pub fn check(&self, inner: &[u32], k: usize) -> Result<ExtResCase> {
        let c = self.basis.algebra();
        let ext = self.extend(inner, k)?;
        let back = restrict(c, &self.frobenius, &ext);
        let restricts = back.matrix == self.space.to_matrix(inner);
        let endo = OpSpace::endomorphisms(c.clone());
        let bound = k * c.p() as usize;
        let ext_order = endo.order_of(&endo.flatten(&ext.matrix), bound);
        Ok(ExtResCase {
            order: k,
            ext_order,
            bound,
            restricts,
        })
    }

    /// The base change of principal parts along `B ⊂ C`, and a retraction of it.
    pub fn principal_parts_retraction(&self, k: usize) -> Result<RetractionCase> {
        let c = self.basis.algebra().clone();
        let pk = k * c.p() as usize;
        let b_alg = Arc::new(self.frobenius.to_algebra(&c));
        let inner = TensorSquare::general(b_alg.clone(), &self.base_in_b);
        let inner_parts = PrincipalParts::from_power(&inner, k, &inner.ideal_powers(k + 1)[k + 1])?;
        let rank = c.dim() / b_alg.dim();
        let outer = TensorSquare::general(c.clone(), &self.base);
        let parts = PrincipalParts::from_power(&outer, pk, &outer.ideal_powers(pk + 1)[pk + 1])?;
        let bs = self.frobenius.basis();
        let seeds: Vec<Vec<u32>> = bs
            .iter()
            .flat_map(|x| bs.iter().map(|y| parts.map.project(&outer.pure(x, y))))
            .collect();
        let image = parts.module.generated(&seeds);
        let summand = parts.module.is_direct_summand(&image)?.is_some();
        Ok(RetractionCase {
            order: k,
            source_dim: rank * inner_parts.dim(),
            image_dim: image.dim(),
            target_dim: parts.dim(),
            summand,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presented;

    #[test]
    fn truncated_line_extensions() {
        let c = Arc::new(presented(3, &["x"], &[2], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let s = extension_setup(c.clone(), &k).unwrap().unwrap();
        assert_eq!(s.frobenius.dim(), 3);
        for k in 0..=2 {
            for d in s.inner_operators(k) {
                assert!(s.check(&d, k).unwrap().holds());
            }
        }
    }

    #[test]
    fn principal_parts_split() {
        let c = Arc::new(presented(2, &["x", "y"], &[2, 1], &["0", "0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let s = extension_setup(c, &k).unwrap().unwrap();
        for k in 0..=2 {
            let r = s.principal_parts_retraction(k).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn no_pbasis_over_frobenius() {
        // F_2[x, y]/(x^2, y^2) over k[xy]: A[C^2] = k[xy], and C is not free over it
        let c = Arc::new(presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap());
        let xy = crate::algebra::element(&c, "x*y").unwrap();
        let b = Subalgebra::generated(&c, &[xy], None);
        assert!(extension_setup(c, &b).unwrap().is_none());
    }
}
