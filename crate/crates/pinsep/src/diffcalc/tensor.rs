use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{FpMatrix, SparseCols, Subspace};
use crate::modules::{CModule, QuotientMap};

/// `C ⊗_A C`, realized as `C ⊗_k C` (coordinate `i * d + j` for `b_i ⊗ b_j`)
/// modulo `I = span{a x ⊗ y - x ⊗ a y}` over the generators `a` of `A`.
#[derive(Clone, Debug)]
pub struct TensorSquare {
    c: Arc<FiniteAlgebra>,
    /// `C ⊗_k C` with the left action `c (x ⊗ y) = c x ⊗ y`.
    ambient: CModule,
    relations: Subspace,
    muls: Vec<SparseCols>,
}

impl TensorSquare {
    /// The construction without a freeness check.
    pub fn general(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Self {
        let d = c.dim();
        let fp = c.fp();
        let muls: Vec<SparseCols> = (0..c.generators().len())
            .map(|i| c.generator_operator(i).clone())
            .collect();
        let left: Vec<SparseCols> = muls
            .iter()
            .map(|l| {
                let mut cols = Vec::with_capacity(d * d);
                for t in 0..d {
                    for j in 0..d {
                        cols.push(l.column(t).iter().map(|&(i, c)| (i * d as u32 + j as u32, c)).collect());
                    }
                }
                SparseCols::from_sparse_columns(fp, d * d, cols)
            })
            .collect();
        let ambient = CModule::new_unchecked(c.clone(), d * d, left).expect("left action");
        let mut rel = Vec::new();
        for g in a.generators() {
            let lg = c.mul_operator(g);
            for k in 0..d * d {
                let mut e = vec![0u32; d * d];
                e[k] = 1;
                rel.push(z_apply(fp, d, &lg, &e));
            }
        }
        let relations = Subspace::span(fp, d * d, rel);
        TensorSquare {
            c,
            ambient,
            relations,
            muls,
        }
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.c
    }

    pub fn ambient(&self) -> &CModule {
        &self.ambient
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// `dim_k (C ⊗_A C)`.
    pub fn dim(&self) -> usize {
        self.ambient.dim() - self.relations.dim()
    }

    pub fn pure(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let fp = self.c.fp();
        let d = self.c.dim();
        let mut v = vec![0u32; d * d];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                v[i * d + j] = fp.mul(a, b);
            }
        }
        v
    }

    /// `z_g u` with `z_g = 1 ⊗ g - g ⊗ 1`, for the `i`-th generator `g`.
    pub fn z(&self, i: usize, u: &[u32]) -> Vec<u32> {
        z_apply(self.c.fp(), self.c.dim(), &self.muls[i], u)
    }

    /// Matrix of the multiplication map `C ⊗_k C -> C`.
    pub fn multiplication_map(&self) -> FpMatrix {
        let d = self.c.dim();
        let cols: Vec<Vec<u32>> = (0..d * d)
            .map(|k| self.c.mul(&self.c.basis_vector(k / d), &self.c.basis_vector(k % d)))
            .collect();
        FpMatrix::from_columns(self.c.fp(), d, &cols).unwrap()
    }

    /// Preimage of `J` in `C ⊗_k C`: the kernel of multiplication.
    pub fn j_lift(&self) -> Subspace {
        Subspace::span(
            self.c.fp(),
            self.ambient.dim(),
            self.multiplication_map().kernel_basis(),
        )
    }

    /// Preimages of `J^0, J^1, ..., J^kmax`, using `J^{k+1} = I + sum_g z_g J^k`.
    pub fn ideal_powers(&self, kmax: usize) -> Vec<Subspace> {
        let n = self.ambient.dim();
        let fp = self.c.fp();
        let mut out = vec![Subspace::full(fp, n)];
        if kmax >= 1 {
            out.push(self.j_lift());
        }
        while out.len() <= kmax {
            let last = out.last().unwrap();
            if out.len() >= 2 && *last == out[out.len() - 2] {
                out.push(last.clone());
                continue;
            }
            let next = self.next_power(last);
            out.push(next);
        }
        out
    }

    fn next_power(&self, last: &Subspace) -> Subspace {
        let mut gens: Vec<Vec<u32>> = self.relations.basis().to_vec();
        for b in last.basis() {
            for i in 0..self.muls.len() {
                gens.push(self.z(i, b));
            }
        }
        Subspace::span(self.c.fp(), self.ambient.dim(), gens)
    }

    /// `1 ⊗ x - x ⊗ 1`.
    pub fn sub_pure(&self, x: &[u32]) -> Vec<u32> {
        let fp = self.c.fp();
        let one = self.c.one();
        let a = self.pure(&one, x);
        let b = self.pure(x, &one);
        a.iter().zip(&b).map(|(&u, &v)| fp.sub(u, v)).collect()
    }

    /// The quotient module `C ⊗_A C` together with `J` in its coordinates.
    pub fn module(&self) -> Result<(CModule, QuotientMap, Subspace)> {
        let (m, q) = self.ambient.quotient(&self.relations)?;
        let j = Subspace::span(self.c.fp(), m.dim(), self.j_lift().basis().iter().map(|v| q.project(v)));
        Ok((m, q, j))
    }
}

fn z_apply(fp: crate::exactla::Fp, d: usize, lg: &SparseCols, u: &[u32]) -> Vec<u32> {
    // U L_g^T - L_g U on the d x d coefficient matrix U
    let mut out = vec![0u32; d * d];
    for t in 0..d {
        for &(j, c) in lg.column(t) {
            let j = j as usize;
            for i in 0..d {
                let x = u[i * d + t];
                if x != 0 {
                    out[i * d + j] = fp.mul_add(out[i * d + j], c, x);
                }
            }
        }
        for &(i, c) in lg.column(t) {
            let i = i as usize;
            let nc = fp.neg(c);
            for j in 0..d {
                let x = u[t * d + j];
                if x != 0 {
                    out[i * d + j] = fp.mul_add(out[i * d + j], nc, x);
                }
            }
        }
    }
    out
}

/// `C ⊗_A C` for `C` free over `A`, with `J` and the rank.
#[derive(Clone, Debug)]
pub struct FreeTensorSquare {
    pub square: TensorSquare,
    pub rank: usize,
    pub module: CModule,
    pub map: QuotientMap,
    pub j: Subspace,
}

/// The tensor square, refusing extensions where `C` is not free over `A`.
pub fn tensor_square(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<FreeTensorSquare> {
    let pair = CModule::of_subalgebra_pair(&c, &Subalgebra::whole(&c), a)?;
    let rank = pair
        .is_free()?
        .ok_or_else(|| Error::precondition("C is not free over A"))?;
    let square = TensorSquare::general(c, a);
    let (module, map, j) = square.module()?;
    Ok(FreeTensorSquare {
        square,
        rank,
        module,
        map,
        j,
    })
}

/// `P^k = (C ⊗_A C) / J^{k+1}` with `delta_k(x) = [1 ⊗ x]`.
#[derive(Clone, Debug)]
pub struct PrincipalParts {
    pub k: usize,
    pub module: CModule,
    pub map: QuotientMap,
    /// `dim P^k x dim C`.
    pub delta: FpMatrix,
}

impl PrincipalParts {
    pub fn from_power(square: &TensorSquare, k: usize, power: &Subspace) -> Result<Self> {
        let c = square.algebra();
        let (module, map) = square.ambient().quotient(power)?;
        let cols: Vec<Vec<u32>> = (0..c.dim())
            .map(|j| map.project(&square.pure(&c.one(), &c.basis_vector(j))))
            .collect();
        let delta = FpMatrix::from_columns(c.fp(), module.dim(), &cols)?;
        Ok(PrincipalParts { k, module, map, delta })
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// `P^0, ..., P^kmax`.
pub fn principal_parts(square: &TensorSquare, kmax: usize) -> Result<Vec<PrincipalParts>> {
    let powers = square.ideal_powers(kmax + 1);
    (0..=kmax)
        .map(|k| PrincipalParts::from_power(square, k, &powers[k + 1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presented;

    fn line(p: u32, e: u32) -> Arc<FiniteAlgebra> {
        Arc::new(presented(p, &["x"], &[e], &["0"]).unwrap())
    }

    #[test]
    fn trivial_extension() {
        let c = line(2, 1);
        let t = tensor_square(c.clone(), &Subalgebra::whole(&c)).unwrap();
        assert_eq!(t.module.dim(), 2);
        assert_eq!(t.j.dim(), 0);
    }

    #[test]
    fn square_of_dual_numbers() {
        let c = line(2, 1);
        let t = tensor_square(c.clone(), &Subalgebra::prime_field(&c)).unwrap();
        assert_eq!(t.module.dim(), 4);
        assert_eq!(t.rank, 2);
        let x = &c.generators()[0];
        let z = t.square.sub_pure(x);
        let xx = t.square.pure(x, x);
        let expected = Subspace::span(c.fp(), 4, [z, xx]);
        assert_eq!(t.j, expected);
    }

    #[test]
    fn z_cubed_vanishes_in_char_three() {
        let c = line(3, 1);
        let t = TensorSquare::general(c.clone(), &Subalgebra::prime_field(&c));
        let one = t.pure(&c.one(), &c.one());
        let z1 = t.z(0, &one);
        assert_eq!(z1, t.sub_pure(&c.generators()[0]));
        let z3 = t.z(0, &t.z(0, &z1));
        assert!(FiniteAlgebra::is_zero(&z3));
        assert!(!FiniteAlgebra::is_zero(&t.z(0, &z1)));
    }

    #[test]
    fn principal_parts_dimensions() {
        let c = line(3, 1);
        let t = TensorSquare::general(c.clone(), &Subalgebra::prime_field(&c));
        let pp = principal_parts(&t, 2).unwrap();
        assert_eq!(pp[0].dim(), 3);
        assert_eq!(pp[0].delta, FpMatrix::identity(c.fp(), 3));
        assert_eq!(pp[2].dim(), 9);
        let c2 = line(2, 1);
        let t2 = TensorSquare::general(c2.clone(), &Subalgebra::prime_field(&c2));
        // z^2 = 0 and z (x ⊗ x) = 0 in characteristic 2, so J^2 = 0
        assert_eq!(principal_parts(&t2, 1).unwrap()[1].dim(), 4);
    }

    #[test]
    fn j_is_generated_by_differences() {
        let c = Arc::new(presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap());
        let t = TensorSquare::general(c.clone(), &Subalgebra::prime_field(&c));
        let full = Subspace::full(c.fp(), 16);
        assert_eq!(t.next_power(&full), t.j_lift());
        assert_eq!(t.j_lift().dim(), 12);
    }
}
