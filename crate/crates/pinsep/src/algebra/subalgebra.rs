use serde::{Deserialize, Serialize};

use super::finite::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{to_sparse, Echelon, Subspace};

/// A unital subalgebra of an owner algebra, stored in owner coordinates.
///
/// The basis is the canonical echelon basis, so equality is basis equality.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    basis: Subspace,
    generators: Vec<Vec<u32>>,
}

impl PartialEq for Subalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Subalgebra {}

impl Subalgebra {
    /// F_p itself, i.e. span{1}.
    pub fn prime_field(c: &FiniteAlgebra) -> Self {
        Subalgebra {
            basis: Subspace::span(c.fp(), c.dim(), [c.one()]),
            generators: Vec::new(),
        }
    }

    pub fn whole(c: &FiniteAlgebra) -> Self {
        Subalgebra {
            basis: Subspace::full(c.fp(), c.dim()),
            generators: c.generators().to_vec(),
        }
    }

    /// Smallest unital subalgebra containing `seed` and `include`, by the
    /// span-and-multiply fixpoint over the seed and the included generators.
    pub fn generated(c: &FiniteAlgebra, seed: &[Vec<u32>], include: Option<&Subalgebra>) -> Self {
        let mut gens: Vec<Vec<u32>> = include.map(|s| s.generators.clone()).unwrap_or_default();
        gens.extend(seed.iter().cloned());
        gens.retain(|g| !FiniteAlgebra::is_zero(g));
        let ops: Vec<_> = gens.iter().map(|g| c.mul_operator(g)).collect();
        let mut ech = Echelon::new(c.fp(), c.dim());
        ech.insert(c.one());
        if let Some(s) = include {
            for b in s.basis.basis() {
                ech.insert(b.clone());
            }
        }
        let mut queue = vec![c.one()];
        if let Some(s) = include {
            queue.extend(s.basis.basis().iter().cloned());
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
        Subalgebra {
            basis: ech.finish(),
            generators: gens,
        }
    }

    /// Wraps a subspace after verifying it is a unital subalgebra.
    pub fn from_subspace(c: &FiniteAlgebra, basis: Subspace, generators: Vec<Vec<u32>>) -> Result<Self> {
        if !basis.contains(&c.one()) {
            return Err(Error::precondition("subspace does not contain 1"));
        }
        for a in basis.basis() {
            for b in basis.basis() {
                if !basis.contains(&c.mul(a, b)) {
                    return Err(Error::precondition("subspace is not closed under multiplication"));
                }
            }
        }
        let generated = Subalgebra::generated(c, &generators, None);
        if generated.basis != basis {
            return Err(Error::precondition("declared generators do not generate the subspace"));
        }
        Ok(Subalgebra { basis, generators })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.basis
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        self.basis.basis()
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.basis.contains(v)
    }

    pub fn contains_subalgebra(&self, other: &Subalgebra) -> bool {
        self.basis.contains_subspace(&other.basis)
    }

    /// Coordinates of an element of the subalgebra in its echelon basis.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        self.basis.coords_unchecked(v)
    }

    pub fn embed(&self, coords: &[u32]) -> Vec<u32> {
        self.basis.combine(coords)
    }

    /// The subalgebra as a standalone algebra in echelon coordinates.
    pub fn to_algebra(&self, c: &FiniteAlgebra) -> FiniteAlgebra {
        let b = self.basis.basis();
        let s = b.len();
        let mut table: Vec<Vec<(u32, u32)>> = Vec::with_capacity(s * s);
        for i in 0..s {
            for j in 0..s {
                if j < i {
                    let sym: Vec<(u32, u32)> = table[j * s + i].clone();
                    table.push(sym);
                } else {
                    table.push(to_sparse(&self.project(&c.mul(&b[i], &b[j]))));
                }
            }
        }
        let labels = b.iter().map(|v| c.format_element(v)).collect();
        let generators: Vec<Vec<u32>> = self.generators.iter().map(|g| self.project(g)).collect();
        let names = self.generators.iter().map(|g| c.format_element(g)).collect();
        FiniteAlgebra::from_table(c.fp(), labels, table, self.project(&c.one()), generators, names)
    }

    /// Re-expresses `inner` (a subalgebra of the owner contained in `self`)
    /// as a subalgebra of `self.to_algebra(c)`.
    pub fn restrict(&self, inner: &Subalgebra) -> Result<Subalgebra> {
        if !self.contains_subalgebra(inner) {
            return Err(Error::precondition("subalgebra is not contained in the ambient level"));
        }
        let fp = self.basis.fp();
        Ok(Subalgebra {
            basis: Subspace::span(fp, self.dim(), inner.basis().iter().map(|v| self.project(v))),
            generators: inner.generators.iter().map(|g| self.project(g)).collect(),
        })
    }

    pub fn format(&self, c: &FiniteAlgebra) -> Vec<String> {
        self.basis.basis().iter().map(|v| c.format_element(v)).collect()
    }
}

/// The chain `T = C^[0] ⊇ C^[1] ⊇ ...` with `C^[e] = A[T^{p^e}]`.
#[derive(Clone, Debug)]
pub struct FrobeniusChain {
    pub levels: Vec<Subalgebra>,
    /// `None` when the chain stabilizes strictly above the base.
    pub exponent: Option<usize>,
}

impl FrobeniusChain {
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subalgebra::dim).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.exponent.is_some()
    }
}

/// Chain of `top` over `base`, built from p^e-th powers of the generators of
/// `top` together with the generators of `base`.
pub fn frobenius_chain(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> Result<FrobeniusChain> {
    if !top.contains_subalgebra(base) {
        return Err(Error::precondition("base is not contained in the top algebra"));
    }
    let mut levels = vec![Subalgebra::generated(c, top.generators(), Some(base))];
    if levels[0] != *top {
        return Err(Error::precondition(
            "top generators together with the base do not generate the top",
        ));
    }
    let mut powers: Vec<Vec<u32>> = top.generators().to_vec();
    loop {
        let last = levels.last().unwrap();
        if last == base {
            return Ok(FrobeniusChain {
                exponent: Some(levels.len() - 1),
                levels,
            });
        }
        powers = powers.iter().map(|g| c.frobenius_power(g, 1)).collect();
        let next = Subalgebra::generated(c, &powers, Some(base));
        if next == *last {
            return Ok(FrobeniusChain { levels, exponent: None });
        }
        levels.push(next);
    }
}

/// Serializable summary of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub dims: Vec<usize>,
    pub exponent: Option<usize>,
}

impl From<&FrobeniusChain> for ChainSummary {
    fn from(ch: &FrobeniusChain) -> Self {
        ChainSummary {
            dims: ch.dims(),
            exponent: ch.exponent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::presented;
    use super::*;
    use crate::exactla::Fp;

    #[test]
    fn empty_seed_gives_prime_field() {
        let c = presented(2, &["x", "y"], &[1, 1], &["0", "0"]);
        let s = Subalgebra::generated(&c, &[], None);
        assert_eq!(s, Subalgebra::prime_field(&c));
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn xy_generates_two_dimensional() {
        let c = presented(2, &["x", "y"], &[1, 1], &["0", "0"]);
        let xy = c.mul(&c.generators()[0], &c.generators()[1]);
        let s = Subalgebra::generated(&c, &[xy], None);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.format(&c), vec!["1".to_string(), "x*y".to_string()]);
    }

    #[test]
    fn cubes_in_composition_example() {
        let c = presented(
            3,
            &["x", "y", "z1", "z2", "z3"],
            &[1, 1, 1, 1, 1],
            &["0", "0", "x^2", "x*y", "y^2"],
        );
        assert_eq!(c.dim(), 243);
        let cubes: Vec<Vec<u32>> = c.generators().iter().map(|g| c.frobenius_power(g, 1)).collect();
        let s = Subalgebra::generated(&c, &cubes, None);
        assert_eq!(s.dim(), 5);
    }

    #[test]
    fn chain_of_truncated_algebra() {
        let c = presented(3, &["x1", "x2"], &[2, 1], &["0", "0"]);
        let ch = frobenius_chain(&c, &Subalgebra::whole(&c), &Subalgebra::prime_field(&c)).unwrap();
        assert_eq!(ch.dims(), vec![27, 3, 1]);
        assert_eq!(ch.exponent, Some(2));
        let x1_cubed = c.pow(&c.generators()[0], 3);
        assert_eq!(ch.levels[1], Subalgebra::generated(&c, &[x1_cubed], None));
    }

    #[test]
    fn trivial_chain() {
        let c = presented(2, &["x"], &[1], &["0"]);
        let w = Subalgebra::whole(&c);
        let ch = frobenius_chain(&c, &w, &w).unwrap();
        assert_eq!(ch.dims(), vec![2]);
        assert_eq!(ch.exponent, Some(0));
    }

    #[test]
    fn kxk_has_no_finite_exponent() {
        let fp = Fp::new(2).unwrap();
        let k = FiniteAlgebra::from_structure_constants(
            fp,
            vec!["e1".into(), "e2".into()],
            vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]],
            vec![1, 1],
            vec![vec![1, 0], vec![0, 1]],
            vec!["e1".into(), "e2".into()],
        )
        .unwrap();
        let ch = frobenius_chain(&k, &Subalgebra::whole(&k), &Subalgebra::prime_field(&k)).unwrap();
        assert_eq!(ch.exponent, None);
    }

    #[test]
    fn to_algebra_preserves_products() {
        let c = presented(3, &["x"], &[2], &["0"]);
        let x3 = c.pow(&c.generators()[0], 3);
        let s = Subalgebra::generated(&c, std::slice::from_ref(&x3), None);
        let a = s.to_algebra(&c);
        assert_eq!(a.dim(), 3);
        let u = s.project(&x3);
        let u2 = a.mul(&u, &u);
        assert_eq!(s.embed(&u2), c.pow(&x3, 2));
        a.check_axioms().unwrap();
    }
}
