use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::format_monomial;
use super::presentation::Presentation;
use crate::error::{Error, Result};
use crate::exactla::{to_sparse, unit, Echelon, Fp, FpMatrix, SparseCols, Subspace};

/// Default cap on algebra dimension.
pub const DEFAULT_MAX_DIM: usize = 100_000;

/// Structure constants above this size are only spot-checked.
const EXHAUSTIVE_CHECK_DIM: usize = 64;
const SAMPLED_TRIPLES: usize = 20_000;

type SparseVec = Vec<(u32, u32)>;

#[derive(Clone, Debug)]
enum Mult {
    /// Basis = reduced monomials; multiplication through generator operators.
    Presented { strides: Vec<usize>, orders: Vec<usize> },
    /// Full table of basis products, index `i * d + j`.
    Table { table: Vec<SparseVec> },
}

/// A commutative finite-dimensional F_p-algebra with designated generators.
#[derive(Debug)]
pub struct FiniteAlgebra {
    fp: Fp,
    dim: usize,
    labels: Vec<String>,
    mult: Mult,
    gen_ops: Vec<SparseCols>,
    unit: Vec<u32>,
    generators: Vec<Vec<u32>>,
    generator_names: Vec<String>,
    presentation: Option<Presentation>,
    radical: OnceLock<Radical>,
    words: OnceLock<WordBasis>,
}

/// Nilradical data computed from a high Frobenius power.
#[derive(Clone, Debug)]
pub struct Radical {
    pub space: Subspace,
    /// Residue functional when the algebra is local with residue field F_p.
    pub residue: Option<Vec<u32>>,
}

/// A basis of monomial words in the generators, built breadth first.
#[derive(Clone, Debug)]
pub struct WordBasis {
    /// `steps[t] = Some((g, s))` means word t is generator g times word s.
    pub steps: Vec<Option<(usize, usize)>>,
    /// Word vectors in basis coordinates, one per column.
    pub words: Vec<Vec<u32>>,
    /// Change of coordinates from basis to words; `None` when they coincide.
    pub to_words: Option<FpMatrix>,
}

impl Clone for FiniteAlgebra {
    fn clone(&self) -> Self {
        FiniteAlgebra {
            fp: self.fp,
            dim: self.dim,
            labels: self.labels.clone(),
            mult: self.mult.clone(),
            gen_ops: self.gen_ops.clone(),
            unit: self.unit.clone(),
            generators: self.generators.clone(),
            generator_names: self.generator_names.clone(),
            presentation: self.presentation.clone(),
            radical: OnceLock::new(),
            words: OnceLock::new(),
        }
    }
}

impl FiniteAlgebra {
    /// Compiles a triangular presentation into its reduced-monomial basis.
    pub fn from_presentation(pres: &Presentation, max_dim: usize) -> Result<Self> {
        pres.validate()?;
        let fp = pres.fp();
        let dim = pres.dimension().filter(|&d| d <= max_dim as u64).ok_or_else(|| {
            Error::Resource(format!(
                "presented algebra has dimension {} above the cap {max_dim}",
                pres.dimension()
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "> 2^64".into())
            ))
        })? as usize;
        let n = pres.len();
        let orders: Vec<usize> = pres.orders().iter().map(|&q| q as usize).collect();
        let mut strides = vec![1usize; n];
        for i in 1..n {
            strides[i] = strides[i - 1] * orders[i - 1];
        }
        let exps_of = |t: usize| -> Vec<usize> { (0..n).map(|i| (t / strides[i]) % orders[i]).collect() };

        let mut gen_ops: Vec<SparseCols> = Vec::with_capacity(n);
        for i in 0..n {
            let rel: SparseVec = {
                let mut v = vec![0u32; dim];
                for t in pres.relations[i].terms.iter().filter(|t| t.coeff != 0) {
                    let idx: usize = (0..n).map(|j| t.exps[j] as usize * strides[j]).sum();
                    v[idx] = fp.add(v[idx], t.coeff);
                }
                to_sparse(&v)
            };
            let mut cols: Vec<SparseVec> = Vec::with_capacity(dim);
            for t in 0..dim {
                let a = exps_of(t);
                if a[i] + 1 < orders[i] {
                    cols.push(vec![((t + strides[i]) as u32, 1)]);
                    continue;
                }
                // x_i^{q_i} -> P_i, then multiply by the lower and upper parts of x^a
                let mut v = rel.clone();
                for (j, op) in gen_ops.iter().enumerate().take(i) {
                    for _ in 0..a[j] {
                        v = apply_sparse(fp, dim, op, &v);
                    }
                }
                let shift: usize = ((i + 1)..n).map(|j| a[j] * strides[j]).sum();
                cols.push(v.into_iter().map(|(k, c)| (k + shift as u32, c)).collect());
            }
            gen_ops.push(SparseCols::from_sparse_columns(fp, dim, cols));
        }

        let labels = (0..dim)
            .map(|t| {
                let e: Vec<u32> = exps_of(t).iter().map(|&x| x as u32).collect();
                format_monomial(1, &e, &pres.names)
            })
            .collect();
        let generators = (0..n).map(|i| unit(dim, strides[i])).collect();
        Ok(FiniteAlgebra {
            fp,
            dim,
            labels,
            mult: Mult::Presented { strides, orders },
            gen_ops,
            unit: unit(dim, 0),
            generators,
            generator_names: pres.names.clone(),
            presentation: Some(pres.clone()),
            radical: OnceLock::new(),
            words: OnceLock::new(),
        })
    }

    /// Builds an algebra from a full product table `products[i][j] = b_i b_j`.
    ///
    /// Commutativity, associativity and the unit law are verified: exhaustively
    /// up to dimension 64, on a fixed pseudo-random sample of triples above.
    pub fn from_structure_constants(
        fp: Fp,
        labels: Vec<String>,
        products: Vec<Vec<Vec<u32>>>,
        unit_vec: Vec<u32>,
        generators: Vec<Vec<u32>>,
        generator_names: Vec<String>,
    ) -> Result<Self> {
        let d = labels.len();
        if products.len() != d || products.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
            return Err(Error::structural(
                "product table must be d x d with vectors of length d",
            ));
        }
        if unit_vec.len() != d || generators.iter().any(|g| g.len() != d) {
            return Err(Error::structural("unit and generators must have length d"));
        }
        let table: Vec<SparseVec> = products
            .iter()
            .flat_map(|row| row.iter().map(|v| to_sparse(v)))
            .collect();
        let alg = Self::from_table(fp, labels, table, unit_vec, generators, generator_names);
        alg.check_axioms()?;
        Ok(alg)
    }

    pub(crate) fn from_table(
        fp: Fp,
        labels: Vec<String>,
        table: Vec<SparseVec>,
        unit_vec: Vec<u32>,
        generators: Vec<Vec<u32>>,
        generator_names: Vec<String>,
    ) -> Self {
        let dim = labels.len();
        let mut alg = FiniteAlgebra {
            fp,
            dim,
            labels,
            mult: Mult::Table { table },
            gen_ops: Vec::new(),
            unit: unit_vec,
            generators,
            generator_names,
            presentation: None,
            radical: OnceLock::new(),
            words: OnceLock::new(),
        };
        alg.gen_ops = alg.generators.iter().map(|g| alg.mul_operator(g)).collect();
        alg
    }

    pub fn check_axioms(&self) -> Result<()> {
        let d = self.dim;
        let basis = |i: usize| unit(d, i);
        for i in 0..d {
            if self.mul(&self.unit, &basis(i)) != basis(i) {
                return Err(Error::structural(format!(
                    "unit does not act as identity on `{}`",
                    self.labels[i]
                )));
            }
        }
        let mut triples: Vec<(usize, usize, usize)> = Vec::new();
        if d <= EXHAUSTIVE_CHECK_DIM {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        triples.push((i, j, k));
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_TRIPLES {
                triples.push((rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d)));
            }
        }
        for &(i, j, _) in &triples {
            if self.mul(&basis(i), &basis(j)) != self.mul(&basis(j), &basis(i)) {
                return Err(Error::structural(format!(
                    "not commutative on ({}, {})",
                    self.labels[i], self.labels[j]
                )));
            }
        }
        for (i, j, k) in triples {
            let left = self.mul(&self.mul(&basis(i), &basis(j)), &basis(k));
            let right = self.mul(&basis(i), &self.mul(&basis(j), &basis(k)));
            if left != right {
                return Err(Error::structural(format!(
                    "associativity failure on ({}, {}, {})",
                    self.labels[i], self.labels[j], self.labels[k]
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn fp(&self) -> Fp {
        self.fp
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.fp.p()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn one(&self) -> Vec<u32> {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        unit(self.dim, i)
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    /// Multiplication by the i-th designated generator.
    pub fn generator_operator(&self, i: usize) -> &SparseCols {
        &self.gen_ops[i]
    }

    /// Exponent vector of a basis element of a presented algebra.
    pub fn monomial_exponents(&self, t: usize) -> Option<Vec<usize>> {
        match &self.mult {
            Mult::Presented { strides, orders } => {
                Some((0..strides.len()).map(|i| (t / strides[i]) % orders[i]).collect())
            }
            Mult::Table { .. } => None,
        }
    }

    /// Basis index of the reduced monomial with the given exponents.
    pub fn monomial_index(&self, exps: &[usize]) -> Option<usize> {
        match &self.mult {
            Mult::Presented { strides, orders } => {
                if exps.len() != strides.len() || exps.iter().zip(orders).any(|(e, q)| e >= q) {
                    return None;
                }
                Some(exps.iter().zip(strides).map(|(e, s)| e * s).sum())
            }
            Mult::Table { .. } => None,
        }
    }

    pub fn add(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        u.iter().zip(v).map(|(&a, &b)| self.fp.add(a, b)).collect()
    }

    pub fn sub(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        u.iter().zip(v).map(|(&a, &b)| self.fp.sub(a, b)).collect()
    }

    pub fn scale(&self, c: u32, v: &[u32]) -> Vec<u32> {
        v.iter().map(|&a| self.fp.mul(a, c)).collect()
    }

    /// `u - lambda * 1`.
    pub fn shift(&self, u: &[u32], lambda: u32) -> Vec<u32> {
        let l = self.fp.neg(lambda);
        u.iter()
            .zip(&self.unit)
            .map(|(&a, &e)| self.fp.mul_add(a, l, e))
            .collect()
    }

    pub fn mul(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(u.len(), self.dim);
        debug_assert_eq!(v.len(), self.dim);
        match &self.mult {
            Mult::Table { table } => {
                let p = self.fp.p() as u64;
                let mut acc = vec![0u64; self.dim];
                let vs = to_sparse(v);
                for (i, &a) in u.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for &(j, b) in &vs {
                        let ab = a as u64 * b as u64 % p;
                        for &(k, c) in &table[i * self.dim + j as usize] {
                            let t = &mut acc[k as usize];
                            *t = (*t + ab * c as u64) % p;
                        }
                    }
                }
                acc.into_iter().map(|x| x as u32).collect()
            }
            Mult::Presented { strides, orders } => {
                let nu = u.iter().filter(|&&x| x != 0).count();
                let nv = v.iter().filter(|&&x| x != 0).count();
                let (s, o) = if nu <= nv { (u, v) } else { (v, u) };
                self.mul_presented(s, o, strides, orders)
            }
        }
    }

    fn mul_presented(&self, s: &[u32], o: &[u32], strides: &[usize], orders: &[usize]) -> Vec<u32> {
        let n = strides.len();
        let os = to_sparse(o);
        let mut acc = vec![0u32; self.dim];
        for (t, &c) in s.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut w = os.clone();
            for i in 0..n {
                for _ in 0..(t / strides[i]) % orders[i] {
                    w = self.gen_ops[i].apply_sparse(&w);
                }
            }
            for (k, b) in w {
                let a = &mut acc[k as usize];
                *a = self.fp.mul_add(*a, c, b);
            }
        }
        acc
    }

    /// Multiplication by `c` as a column-sparse operator.
    pub fn mul_operator(&self, c: &[u32]) -> SparseCols {
        let cols: Vec<Vec<u32>> = (0..self.dim).map(|j| self.mul(c, &self.basis_vector(j))).collect();
        SparseCols::from_dense_columns(self.fp, self.dim, &cols)
    }

    pub fn mul_matrix(&self, c: &[u32]) -> FpMatrix {
        self.mul_operator(c).to_dense()
    }

    pub fn pow(&self, x: &[u32], mut n: u64) -> Vec<u32> {
        let mut base = x.to_vec();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `x^{p^e}` by `e` successive p-th powers.
    pub fn frobenius_power(&self, x: &[u32], e: u32) -> Vec<u32> {
        let mut y = x.to_vec();
        for _ in 0..e {
            y = self.pow(&y, self.fp.p() as u64);
        }
        y
    }

    pub fn is_zero(v: &[u32]) -> bool {
        v.iter().all(|&x| x == 0)
    }

    /// Nilradical and residue functional, computed from `x -> x^{p^N}` with
    /// `p^N >= dim`, which is F_p-linear and kills exactly the nilpotents.
    pub fn radical(&self) -> &Radical {
        self.radical.get_or_init(|| {
            let mut big_n = 0u32;
            let mut q = 1usize;
            while q < self.dim.max(1) {
                q = q.saturating_mul(self.fp.p() as usize);
                big_n += 1;
            }
            let images: Vec<Vec<u32>> = (0..self.dim)
                .map(|i| self.frobenius_power(&self.basis_vector(i), big_n))
                .collect();
            let m = FpMatrix::from_columns(self.fp, self.dim, &images).expect("square");
            let space = Subspace::span(self.fp, self.dim, m.kernel_basis());
            let residue = if space.dim() + 1 == self.dim {
                let k = self.unit.iter().position(|&x| x != 0).expect("nonzero unit");
                let inv = self.fp.inv(self.unit[k]).unwrap();
                Some(images.iter().map(|img| self.fp.mul(img[k], inv)).collect())
            } else {
                None
            };
            Radical { space, residue }
        })
    }

    pub fn is_local(&self) -> bool {
        self.radical().residue.is_some()
    }

    /// Errors with an idempotent witness when the algebra is not local.
    pub fn require_local(&self) -> Result<()> {
        if self.is_local() {
            Ok(())
        } else {
            Err(Error::NotLocal {
                witness: self.nontrivial_idempotent().map(|e| self.format_element(&e)),
            })
        }
    }

    /// The residue map C -> C/rad = F_p of a local algebra.
    pub fn residue(&self, x: &[u32]) -> Option<u32> {
        let r = self.radical().residue.as_ref()?;
        let p = self.fp.p() as u64;
        Some((x.iter().zip(r).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32)
    }

    /// A nontrivial idempotent, searched for among lifts of F_p-rational points
    /// of the reduced algebra.
    pub fn nontrivial_idempotent(&self) -> Option<Vec<u32>> {
        let rad = &self.radical().space;
        if rad.dim() + 1 >= self.dim || self.fp.p() > 1000 {
            return None;
        }
        let p = self.fp.p() as u64;
        let cols: Vec<Vec<u32>> = (0..self.dim)
            .map(|i| {
                let b = self.basis_vector(i);
                rad.reduce(&self.sub(&self.pow(&b, p), &b))
            })
            .collect();
        let fixed = FpMatrix::from_columns(self.fp, self.dim, &cols).ok()?.kernel_basis();
        let trivial = rad.sum(&Subspace::span(self.fp, self.dim, [self.one()]));
        for x in fixed.iter().filter(|x| !trivial.contains(x)) {
            for lambda in 0..self.fp.p() {
                let e0 = self.pow(&self.shift(x, lambda), p - 1);
                if rad.contains(&e0) || rad.contains(&self.shift(&e0, 1)) {
                    continue;
                }
                // e0 = idempotent + nilpotent, and p-th powers kill the nilpotent part
                let mut e = e0;
                for _ in 0..64 {
                    if self.mul(&e, &e) == e {
                        return Some(e);
                    }
                    e = self.pow(&e, p);
                }
            }
        }
        None
    }

    /// Generators of the maximal ideal of a local algebra: `g - residue(g)`.
    pub fn max_ideal_generators(&self) -> Result<Vec<Vec<u32>>> {
        self.require_local()?;
        Ok(self
            .generators
            .iter()
            .map(|g| self.shift(g, self.residue(g).unwrap()))
            .collect())
    }

    /// Breadth-first basis of generator words.
    pub fn word_basis(&self) -> &WordBasis {
        self.words.get_or_init(|| {
            if let Mult::Presented { strides, orders } = &self.mult {
                let n = strides.len();
                let steps = (0..self.dim)
                    .map(|t| {
                        (0..n)
                            .find(|&i| (t / strides[i]) % orders[i] > 0)
                            .map(|i| (i, t - strides[i]))
                    })
                    .collect();
                let words = (0..self.dim).map(|t| self.basis_vector(t)).collect();
                return WordBasis {
                    steps,
                    words,
                    to_words: None,
                };
            }
            let mut ech = Echelon::new(self.fp, self.dim);
            let mut steps = vec![None];
            let mut words = vec![self.one()];
            ech.insert(self.one());
            let mut head = 0;
            while head < words.len() && words.len() < self.dim {
                for (g, op) in self.gen_ops.iter().enumerate() {
                    let w = op.apply(&words[head]);
                    if ech.insert(w.clone()) {
                        steps.push(Some((g, head)));
                        words.push(w);
                    }
                }
                head += 1;
            }
            assert_eq!(words.len(), self.dim, "designated generators must generate the algebra");
            let m = FpMatrix::from_columns(self.fp, self.dim, &words).unwrap();
            let identity = m == FpMatrix::identity(self.fp, self.dim);
            WordBasis {
                steps,
                words,
                to_words: if identity {
                    None
                } else {
                    Some(m.inverse().expect("words form a basis"))
                },
            }
        })
    }

    /// Whether the designated generators generate the whole algebra.
    pub fn generators_generate(&self) -> bool {
        let mut ech = Echelon::new(self.fp, self.dim);
        let mut queue = vec![self.one()];
        ech.insert(self.one());
        let mut head = 0;
        while head < queue.len() {
            for op in &self.gen_ops {
                let w = op.apply(&queue[head]);
                if ech.insert(w.clone()) {
                    queue.push(w);
                }
            }
            head += 1;
        }
        ech.dim() == self.dim
    }

    /// Quotient by an ideal, with basis the non-pivot coordinates of the ideal.
    pub fn quotient(&self, ideal: &Subspace) -> Result<FiniteAlgebra> {
        for b in ideal.basis() {
            for op in &self.gen_ops {
                if !ideal.contains(&op.apply(b)) {
                    return Err(Error::precondition("subspace is not an ideal"));
                }
            }
        }
        let keep = ideal.free_columns();
        let proj = |v: &[u32]| -> Vec<u32> {
            let r = ideal.reduce(v);
            keep.iter().map(|&c| r[c]).collect()
        };
        let q = keep.len();
        let mut table = Vec::with_capacity(q * q);
        for &a in &keep {
            for &b in &keep {
                table.push(to_sparse(&proj(
                    &self.mul(&self.basis_vector(a), &self.basis_vector(b)),
                )));
            }
        }
        let labels = keep.iter().map(|&c| self.labels[c].clone()).collect();
        let generators = self.generators.iter().map(|g| proj(g)).collect();
        Ok(FiniteAlgebra::from_table(
            self.fp,
            labels,
            table,
            proj(&self.unit),
            generators,
            self.generator_names.clone(),
        ))
    }

    pub fn format_element(&self, v: &[u32]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let l = &self.labels[i];
                match (c, l.as_str()) {
                    (c, "1") => c.to_string(),
                    (1, _) => l.clone(),
                    (c, _) => format!("{c}*{l}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn apply_sparse(fp: Fp, dim: usize, op: &SparseCols, v: &[(u32, u32)]) -> SparseVec {
    let mut dense = vec![0u32; dim];
    for &(j, x) in v {
        for &(i, a) in op.column(j as usize) {
            let t = &mut dense[i as usize];
            *t = fp.mul_add(*t, x, a);
        }
    }
    to_sparse(&dense)
}

#[cfg(test)]
mod tests {
    use super::super::poly::parse_poly;
    use super::super::testing::presented;
    use super::*;

    #[test]
    fn smallest_split_algebra() {
        let c = presented(2, &["x"], &[1], &["0"]);
        assert_eq!(c.dim(), 2);
        let x = c.generators()[0].clone();
        assert!(FiniteAlgebra::is_zero(&c.mul(&x, &x)));
    }

    #[test]
    fn truncated_dimension_27() {
        let c = presented(3, &["x", "y"], &[2, 1], &["0", "0"]);
        assert_eq!(c.dim(), 27);
        let x = &c.generators()[0];
        let x3 = c.pow(x, 3);
        let x6 = c.pow(x, 6);
        assert!(FiniteAlgebra::is_zero(&c.mul(&x3, &x6)));
        assert!(!FiniteAlgebra::is_zero(&c.pow(x, 8)));
    }

    #[test]
    fn example_tower_dimension() {
        let c = presented(
            3,
            &["x", "y", "z1", "z2", "t1", "t2"],
            &[1, 1, 1, 1, 1, 1],
            &["0", "0", "x^2", "y^2", "x", "y"],
        );
        assert_eq!(c.dim(), 729);
        let t1 = &c.generators()[4];
        assert_eq!(c.pow(t1, 3), c.generators()[0]);
        c.check_axioms().unwrap();
    }

    #[test]
    fn frobenius_examples() {
        let c = presented(2, &["x"], &[1], &["0"]);
        let one_plus_x = c.add(&c.one(), &c.generators()[0]);
        assert_eq!(c.frobenius_power(&one_plus_x, 1), c.one());
        assert_eq!(c.frobenius_power(&one_plus_x, 0), one_plus_x);
        let c9 = presented(3, &["x"], &[2], &["0"]);
        let x = &c9.generators()[0];
        assert_eq!(c9.frobenius_power(x, 1), c9.pow(x, 3));
    }

    #[test]
    fn rejects_non_triangular() {
        let names: Vec<String> = ["t", "u"].iter().map(|s| s.to_string()).collect();
        let fp = Fp::new(3).unwrap();
        let rels = vec![
            parse_poly(fp, "u", &names, 1, 0).unwrap(),
            parse_poly(fp, "0", &names, 1, 0).unwrap(),
        ];
        assert!(Presentation::new(3, names, vec![1, 1], rels).is_err());
    }

    #[test]
    fn dimension_cap() {
        let names: Vec<String> = ["x"].iter().map(|s| s.to_string()).collect();
        let pres = Presentation::split(2, names, vec![20]).unwrap();
        assert!(matches!(
            FiniteAlgebra::from_presentation(&pres, 1000),
            Err(Error::Resource(_))
        ));
    }

    fn kxk() -> FiniteAlgebra {
        let fp = Fp::new(2).unwrap();
        let products = vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]];
        FiniteAlgebra::from_structure_constants(
            fp,
            vec!["e1".into(), "e2".into()],
            products,
            vec![1, 1],
            vec![vec![1, 0], vec![0, 1]],
            vec!["e1".into(), "e2".into()],
        )
        .unwrap()
    }

    #[test]
    fn locality() {
        let c = presented(3, &["x", "y"], &[2, 1], &["0", "x^3"]);
        assert!(c.is_local());
        assert_eq!(c.radical().space.dim(), 26);
        let k = kxk();
        assert!(!k.is_local());
        let e = k.nontrivial_idempotent().unwrap();
        assert_eq!(k.mul(&e, &e), e);
        assert!(matches!(k.require_local(), Err(Error::NotLocal { witness: Some(_) })));
    }

    #[test]
    fn associativity_violation_detected() {
        let fp = Fp::new(2).unwrap();
        // basis 1, a, b with a*a = b, a*b = a (wrong), b*b = 0
        let products = vec![
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 1, 0]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 0, 0]],
        ];
        let r = FiniteAlgebra::from_structure_constants(
            fp,
            vec!["1".into(), "a".into(), "b".into()],
            products,
            vec![1, 0, 0],
            vec![vec![0, 1, 0]],
            vec!["a".into()],
        );
        assert!(matches!(r, Err(Error::Structural(m)) if m.contains("associativity")));
    }

    #[test]
    fn words_of_table_algebra() {
        let k = kxk();
        let w = k.word_basis();
        assert_eq!(w.words.len(), 2);
    }
}
