use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_chain, FiniteAlgebra, Subalgebra};
use crate::diffcalc::{diff_dual, OpSpace};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, FpMatrix, Subspace};
use crate::modules::{CModule, Retraction};

/// `End_A(C)` for `C` free over `A`, as matrices flattened column-major.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    base: Subalgebra,
    space: OpSpace,
    hom: Subspace,
    /// Left `C`-module on all of `Hom_k(C, C)`.
    ambient: CModule,
    /// Left `C`-module on `End_A(C)` in the echelon coordinates of `hom`.
    module: CModule,
    rank: usize,
}

/// Smallest subspace containing the identity and closed under left
/// composition with `gens`, i.e. the unital algebra the maps generate.
pub fn composition_closure(space: &OpSpace, gens: &[FpMatrix]) -> Subspace {
    let c = space.algebra();
    let id = FpMatrix::identity(c.fp(), c.dim());
    let mut ech = Echelon::new(c.fp(), space.dim());
    ech.insert(space.flatten(&id));
    let mut queue = vec![id];
    let mut head = 0;
    while head < queue.len() {
        for g in gens {
            let w = g.mul(&queue[head]).expect("square maps");
            if ech.insert(space.flatten(&w)) {
                queue.push(w);
            }
        }
        head += 1;
    }
    ech.finish()
}

impl EndAlgebra {
    pub fn new(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<Self> {
        let whole = Subalgebra::whole(&c);
        let Some(rank) = CModule::of_subalgebra_pair(&c, &whole, a)?.is_free()? else {
            return Err(Error::precondition("C is not free over A"));
        };
        let space = OpSpace::endomorphisms(c.clone());
        let hom = space.hom_over(a);
        if hom.dim() != c.dim() * rank {
            return Err(Error::structural("dim End_A(C) differs from dim C * rank"));
        }
        let ambient = space.left_module();
        let module = ambient.submodule(&hom)?;
        Ok(EndAlgebra {
            base: a.clone(),
            space,
            hom,
            ambient,
            module,
            rank,
        })
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        self.space.algebra()
    }

    pub fn base(&self) -> &Subalgebra {
        &self.base
    }

    pub fn space(&self) -> &OpSpace {
        &self.space
    }

    pub fn hom(&self) -> &Subspace {
        &self.hom
    }

    pub fn module(&self) -> &CModule {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.hom.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity(&self) -> Vec<u32> {
        let c = self.algebra();
        self.space.flatten(&FpMatrix::identity(c.fp(), c.dim()))
    }

    pub fn multiplication(&self, x: &[u32]) -> Vec<u32> {
        self.space.flatten(&self.algebra().mul_matrix(x))
    }

    /// `u ∘ v`.
    pub fn compose(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let m = self
            .space
            .to_matrix(u)
            .mul(&self.space.to_matrix(v))
            .expect("square maps");
        self.space.flatten(&m)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.hom.contains(v)
    }

    /// The embedded copy of `C`: multiplication operators.
    pub fn embedded_algebra(&self) -> Subspace {
        let c = self.algebra();
        Subspace::span(
            c.fp(),
            self.space.dim(),
            (0..c.dim()).map(|t| self.multiplication(&c.basis_vector(t))),
        )
    }

    /// A subspace of `End_A(C)` in the echelon coordinates of `hom`.
    pub fn local_coords(&self, s: &Subspace) -> Result<Subspace> {
        let vs = s
            .basis()
            .iter()
            .map(|v| {
                self.hom
                    .coords(v)
                    .ok_or_else(|| Error::precondition("map is not A-linear"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(self.hom.fp(), self.hom.dim(), vs))
    }

    /// `End_A(C) = Hom_C(C ⊗_A C, C)`: compares with the dual of the principal
    /// parts of top order. `None` when the exponent is infinite (no nilpotent
    /// diagonal ideal to dualize through).
    pub fn dual_identification(&self) -> Result<Option<bool>> {
        let c = self.algebra();
        let chain = frobenius_chain(c, &Subalgebra::whole(c), &self.base)?;
        let Some(exp) = chain.exponent else {
            return Ok(None);
        };
        let kmax = self.space.order_limit(exp);
        let dual = diff_dual(&self.space, &self.base, kmax)?;
        Ok(Some(dual.levels.last() == Some(&self.hom)))
    }

    /// Module generators of a left-stable subspace (minimal over local `C`).
    fn module_generators(&self, s: &Subspace) -> Result<Vec<Vec<u32>>> {
        if !self.algebra().is_local() {
            return Ok(s.basis().to_vec());
        }
        let sub = self.ambient.submodule(s)?;
        Ok(sub.minimal_generators()?.iter().map(|v| s.combine(v)).collect())
    }
}

/// A subspace of `End_A(C)` with its structural flags, all computed.
#[derive(Clone, Debug)]
pub struct EndSubalgebra {
    pub space: Subspace,
    pub contains_unit: bool,
    pub composition_closed: bool,
    pub left_stable: bool,
    pub summand: Option<Retraction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndSubalgebraFlags {
    pub dim: usize,
    pub contains_unit: bool,
    pub composition_closed: bool,
    pub left_stable: bool,
    pub summand: bool,
}

impl EndSubalgebra {
    pub fn new(end: &EndAlgebra, space: Subspace) -> Result<Self> {
        if !end.hom.contains_subspace(&space) {
            return Err(Error::precondition("subspace is not inside End_A(C)"));
        }
        let contains_unit = space.contains(&end.identity());
        let left_stable = end.ambient.is_stable(&space);
        // for a left-stable H, (c h) ∘ v = c (h ∘ v), so module generators suffice
        let gens = if left_stable {
            end.module_generators(&space)?
        } else {
            space.basis().to_vec()
        };
        let mats: Vec<FpMatrix> = space.basis().iter().map(|v| end.space.to_matrix(v)).collect();
        let composition_closed = gens.iter().all(|g| {
            let gm = end.space.to_matrix(g);
            mats.iter()
                .all(|v| space.contains(&end.space.flatten(&gm.mul(v).expect("square maps"))))
        });
        let summand = if left_stable {
            end.module.is_direct_summand(&end.local_coords(&space)?)?
        } else {
            None
        };
        Ok(EndSubalgebra {
            space,
            contains_unit,
            composition_closed,
            left_stable,
            summand,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Unital, composition-closed, left-stable and a summand.
    pub fn is_admissible(&self) -> bool {
        self.contains_unit && self.composition_closed && self.left_stable && self.summand.is_some()
    }

    pub fn flags(&self) -> EndSubalgebraFlags {
        EndSubalgebraFlags {
            dim: self.dim(),
            contains_unit: self.contains_unit,
            composition_closed: self.composition_closed,
            left_stable: self.left_stable,
            summand: self.summand.is_some(),
        }
    }
}

/// `End_B(C)` inside `End_A(C)`.
pub fn end_over(end: &EndAlgebra, b: &Subalgebra) -> Result<EndSubalgebra> {
    if !b.contains_subalgebra(&end.base) {
        return Err(Error::precondition("B does not contain A"));
    }
    let s = end.space.hom_over(b).intersect(&end.hom);
    EndSubalgebra::new(end, s)
}

/// `B_H = {x in C : [φ, x] = 0 for φ in H}`, solved as one linear system and
/// returned as a verified subalgebra.
pub fn constants_of(end: &EndAlgebra, h: &EndSubalgebra) -> Result<Subalgebra> {
    let c = end.algebra();
    let fp = c.fp();
    let d = c.dim();
    // [c φ, x] = c [φ, x], so generators of a left-stable H suffice
    let phis = if h.left_stable {
        end.module_generators(&h.space)?
    } else {
        h.space.basis().to_vec()
    };
    let cols: Vec<Vec<u32>> = (0..d)
        .map(|t| {
            let x = c.basis_vector(t);
            phis.iter().flat_map(|phi| end.space.bracket(&x, phi)).collect()
        })
        .collect();
    let kernel = if phis.is_empty() {
        Subspace::full(fp, d)
    } else {
        let m = FpMatrix::from_columns(fp, phis.len() * d * d, &cols)?;
        Subspace::span(fp, d, m.kernel_basis())
    };
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut current = Subalgebra::prime_field(c);
    for v in kernel.basis() {
        if !current.contains(v) {
            gens.push(v.clone());
            current = Subalgebra::generated(c, &gens, None);
        }
    }
    Subalgebra::from_subspace(c, kernel, gens)
}

/// Smallest unital subalgebra of `End_A(C)` containing `seeds` and stable
/// under the left `C`-action.
pub fn close_subalgebra(end: &EndAlgebra, seeds: &[Vec<u32>]) -> Result<EndSubalgebra> {
    if seeds.iter().any(|s| !end.contains(s)) {
        return Err(Error::precondition("seed endomorphism is not A-linear"));
    }
    let c = end.algebra();
    let mut gens: Vec<FpMatrix> = c.generators().iter().map(|g| c.mul_matrix(g)).collect();
    gens.extend(seeds.iter().map(|s| end.space.to_matrix(s)));
    let s = composition_closure(&end.space, &gens);
    EndSubalgebra::new(end, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{element, presented};

    fn arc(c: FiniteAlgebra) -> Arc<FiniteAlgebra> {
        Arc::new(c)
    }

    #[test]
    fn end_dimensions() {
        let c = arc(presented(2, &["x"], &[1], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let e = EndAlgebra::new(c.clone(), &k).unwrap();
        assert_eq!(e.dim(), 4);
        assert_eq!(e.dual_identification().unwrap(), Some(true));
        let w = Subalgebra::whole(&c);
        let ec = EndAlgebra::new(c, &w).unwrap();
        assert_eq!(ec.dim(), 2);
        assert_eq!(*ec.hom(), ec.embedded_algebra());
    }

    #[test]
    fn end_over_truncated_line() {
        let c = arc(presented(3, &["x"], &[2], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let e = EndAlgebra::new(c.clone(), &k).unwrap();
        let x3 = element(&c, "x^3").unwrap();
        let b = Subalgebra::generated(&c, &[x3], None);
        let h = end_over(&e, &b).unwrap();
        assert_eq!(h.dim(), 27);
        assert!(h.is_admissible());
        assert_eq!(constants_of(&e, &h).unwrap(), b);
        let whole = end_over(&e, &k).unwrap();
        assert_eq!(whole.space, *e.hom());
        assert_eq!(constants_of(&e, &whole).unwrap(), k);
        let emb = end_over(&e, &Subalgebra::whole(&c)).unwrap();
        assert_eq!(emb.space, e.embedded_algebra());
    }

    #[test]
    fn closure_examples() {
        let c = arc(presented(2, &["x"], &[1], &["0"]).unwrap());
        let k = Subalgebra::prime_field(&c);
        let e = EndAlgebra::new(c.clone(), &k).unwrap();
        let empty = close_subalgebra(&e, &[]).unwrap();
        assert_eq!(empty.space, e.embedded_algebra());
        // ∂: 1 -> 0, x -> 1
        let mut d = FpMatrix::zeros(c.fp(), 2, 2);
        d.set(0, 1, 1);
        let full = close_subalgebra(&e, &[e.space().flatten(&d)]).unwrap();
        assert_eq!(full.dim(), 4);
        assert!(full.is_admissible());
    }
}
