use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{unit, Fp, FpMatrix, SparseCols, Subspace};
use crate::modules::CModule;

/// An F_p-linear map `C -> M` with a certified upper bound on its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    /// `dim M x dim C`, column `j` is the image of basis element `j`.
    pub matrix: FpMatrix,
    /// `None` when no bound is certified.
    pub bound: Option<usize>,
}

impl DiffOperator {
    pub fn new(matrix: FpMatrix, bound: Option<usize>) -> Self {
        DiffOperator { matrix, bound }
    }

    pub fn identity(c: &FiniteAlgebra) -> Self {
        DiffOperator::new(FpMatrix::identity(c.fp(), c.dim()), Some(0))
    }

    /// Multiplication by `x` on `C`.
    pub fn multiplication(c: &FiniteAlgebra, x: &[u32]) -> Self {
        DiffOperator::new(c.mul_matrix(x), Some(0))
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.matrix.mul_vec(v).expect("operator source dimension")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// `Hom_k(C, M)` flattened column-major: coordinate `j * dim M + i` is the
/// `i`-th coordinate of the image of the `j`-th basis element of `C`.
#[derive(Clone, Debug)]
pub struct OpSpace {
    c: Arc<FiniteAlgebra>,
    m: CModule,
    basis_acts: Vec<FpMatrix>,
    gen_muls: Vec<SparseCols>,
}

impl OpSpace {
    pub fn new(c: Arc<FiniteAlgebra>, m: CModule) -> Result<Self> {
        if m.ring().dim() != c.dim() || m.ring().generators() != c.generators() {
            return Err(Error::precondition("module is not over the source algebra"));
        }
        let basis_acts = (0..c.dim())
            .map(|j| m.action_operator(&c.basis_vector(j)).to_dense())
            .collect();
        let gen_muls = (0..c.generators().len())
            .map(|i| c.generator_operator(i).clone())
            .collect();
        Ok(OpSpace {
            c,
            m,
            basis_acts,
            gen_muls,
        })
    }

    /// `Hom_k(C, C)` with `C` acting on itself.
    pub fn endomorphisms(c: Arc<FiniteAlgebra>) -> Self {
        let m = CModule::regular(c.clone());
        Self::new(c, m).expect("regular module")
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.c
    }

    pub fn module(&self) -> &CModule {
        &self.m
    }

    pub fn fp(&self) -> Fp {
        self.c.fp()
    }

    pub fn source_dim(&self) -> usize {
        self.c.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.m.dim()
    }

    pub fn dim(&self) -> usize {
        self.c.dim() * self.m.dim()
    }

    pub fn to_matrix(&self, v: &[u32]) -> FpMatrix {
        let (d, m) = (self.source_dim(), self.target_dim());
        let mut out = FpMatrix::zeros(self.fp(), m, d);
        for j in 0..d {
            for i in 0..m {
                out.set(i, j, v[j * m + i]);
            }
        }
        out
    }

    pub fn flatten(&self, a: &FpMatrix) -> Vec<u32> {
        let (d, m) = (self.source_dim(), self.target_dim());
        let mut v = vec![0u32; d * m];
        for j in 0..d {
            for i in 0..m {
                v[j * m + i] = a.get(i, j);
            }
        }
        v
    }

    pub fn operator(&self, v: &[u32], bound: Option<usize>) -> DiffOperator {
        DiffOperator::new(self.to_matrix(v), bound)
    }

    /// `D(x)` for an element `x` of `C`.
    pub fn eval(&self, v: &[u32], x: &[u32]) -> Vec<u32> {
        let fp = self.fp();
        let m = self.target_dim();
        let mut out = vec![0u32; m];
        for (j, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for i in 0..m {
                out[i] = fp.mul_add(out[i], c, v[j * m + i]);
            }
        }
        out
    }

    /// `Hom_k(C, M)` as a left `C`-module, `(c D)(x) = c D(x)`.
    pub fn left_module(&self) -> CModule {
        let (d, m) = (self.source_dim(), self.target_dim());
        let acts = self
            .m
            .gen_actions()
            .iter()
            .map(|a| {
                let mut cols = Vec::with_capacity(d * m);
                for j in 0..d {
                    for i in 0..m {
                        cols.push(a.column(i).iter().map(|&(k, c)| (k + (j * m) as u32, c)).collect());
                    }
                }
                SparseCols::from_sparse_columns(self.fp(), d * m, cols)
            })
            .collect();
        CModule::new_unchecked(self.c.clone(), d * m, acts).expect("block action")
    }

    /// Action of `x` on `M` as a dense matrix.
    pub fn act_matrix(&self, x: &[u32]) -> FpMatrix {
        let fp = self.fp();
        let m = self.target_dim();
        let mut out = FpMatrix::zeros(fp, m, m);
        for (t, &c) in x.iter().enumerate() {
            if c != 0 {
                out = out.add(&self.basis_acts[t].scale(c)).unwrap();
            }
        }
        out
    }

    pub fn basis_act(&self, t: usize) -> &FpMatrix {
        &self.basis_acts[t]
    }

    /// `x . D`, i.e. `c -> x D(c)`.
    pub fn left(&self, x: &[u32], v: &[u32]) -> Vec<u32> {
        let a = self.act_matrix(x);
        self.left_by(&a, v)
    }

    fn left_by(&self, a: &FpMatrix, v: &[u32]) -> Vec<u32> {
        let m = self.target_dim();
        let mut out = Vec::with_capacity(v.len());
        for j in 0..self.source_dim() {
            out.extend(a.mul_vec(&v[j * m..(j + 1) * m]).unwrap());
        }
        out
    }

    /// `D . x`, i.e. `c -> D(x c)`.
    pub fn right(&self, v: &[u32], x: &[u32]) -> Vec<u32> {
        let lx = self.c.mul_operator(x);
        self.right_by(&lx, v)
    }

    fn right_by(&self, lx: &SparseCols, v: &[u32]) -> Vec<u32> {
        let fp = self.fp();
        let m = self.target_dim();
        let mut out = vec![0u32; v.len()];
        for j in 0..self.source_dim() {
            for &(t, c) in lx.column(j) {
                let t = t as usize;
                for i in 0..m {
                    let y = v[t * m + i];
                    if y != 0 {
                        out[j * m + i] = fp.mul_add(out[j * m + i], c, y);
                    }
                }
            }
        }
        out
    }

    /// `[x, D](c) = x D(c) - D(x c)`.
    pub fn bracket(&self, x: &[u32], v: &[u32]) -> Vec<u32> {
        let a = self.act_matrix(x);
        let lx = self.c.mul_operator(x);
        self.bracket_with(&a, &lx, v)
    }

    fn bracket_with(&self, a: &FpMatrix, lx: &SparseCols, v: &[u32]) -> Vec<u32> {
        let fp = self.fp();
        let l = self.left_by(a, v);
        let r = self.right_by(lx, v);
        l.iter().zip(&r).map(|(&x, &y)| fp.sub(x, y)).collect()
    }

    /// Brackets with the designated generators of `C`, prepared once.
    pub fn generator_brackets(&self) -> Vec<Bracketer<'_>> {
        self.c
            .generators()
            .iter()
            .zip(&self.gen_muls)
            .map(|(g, lx)| Bracketer {
                space: self,
                act: self.act_matrix(g),
                mul: lx.clone(),
            })
            .collect()
    }

    /// `[x_1, [x_2, ..., [x_n, D]]]`.
    pub fn iterated_bracket(&self, xs: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for x in xs.iter().rev() {
            w = self.bracket(x, &w);
        }
        w
    }

    /// Closed form `sum_S (-1)^{n-|S|} x_S D(x_{S^c} c)` of the iterated bracket.
    pub fn bracket_development(&self, xs: &[Vec<u32>], v: &[u32], c: &[u32]) -> Result<Vec<u32>> {
        let n = xs.len();
        if n > 20 {
            return Err(Error::Resource("bracket development over more than 20 elements".into()));
        }
        let fp = self.fp();
        let mut acc = vec![0u32; self.target_dim()];
        for mask in 0u32..(1 << n) {
            let mut inside = self.c.one();
            let mut outside = c.to_vec();
            for (i, x) in xs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    inside = self.c.mul(&inside, x);
                } else {
                    outside = self.c.mul(&outside, x);
                }
            }
            let term = self.m.act(&inside, &self.eval(v, &outside));
            let neg = (n - mask.count_ones() as usize) % 2 == 1;
            for (a, &t) in acc.iter_mut().zip(&term) {
                *a = if neg { fp.sub(*a, t) } else { fp.add(*a, t) };
            }
        }
        Ok(acc)
    }

    /// Grouped form: `xs[i]` repeated `reps[i]` times.
    pub fn grouped_bracket_development(&self, xs: &[Vec<u32>], reps: &[usize], v: &[u32], c: &[u32]) -> Vec<u32> {
        let fp = self.fp();
        let mut acc = vec![0u32; self.target_dim()];
        let mut s = vec![0usize; xs.len()];
        loop {
            // coefficient prod_i (-1)^{r_i - s_i} binom(r_i, s_i)
            let mut coeff = 1u32;
            let mut inside = self.c.one();
            let mut outside = c.to_vec();
            for i in 0..xs.len() {
                coeff = fp.mul(coeff, fp.binomial(reps[i] as u64, s[i] as u64));
                if (reps[i] - s[i]) % 2 == 1 {
                    coeff = fp.neg(coeff);
                }
                inside = self.c.mul(&inside, &self.c.pow(&xs[i], s[i] as u64));
                outside = self.c.mul(&outside, &self.c.pow(&xs[i], (reps[i] - s[i]) as u64));
            }
            if coeff != 0 {
                let term = self.m.act(&inside, &self.eval(v, &outside));
                for (a, &t) in acc.iter_mut().zip(&term) {
                    *a = fp.mul_add(*a, coeff, t);
                }
            }
            let mut i = 0;
            loop {
                if i == xs.len() {
                    return acc;
                }
                s[i] += 1;
                if s[i] <= reps[i] {
                    break;
                }
                s[i] = 0;
                i += 1;
            }
        }
    }

    /// Matrix whose columns are `f` applied to the standard basis.
    pub(crate) fn matrix_of(&self, rows: usize, f: impl Fn(&[u32]) -> Vec<u32>) -> FpMatrix {
        let n = self.dim();
        let cols: Vec<Vec<u32>> = (0..n).map(|k| f(&unit(n, k))).collect();
        FpMatrix::from_columns(self.fp(), rows, &cols).expect("shape")
    }

    /// `Hom_A(C, M)`: maps commuting with the generators of `a`.
    pub fn hom_over(&self, a: &Subalgebra) -> Subspace {
        let n = self.dim();
        if a.generators().is_empty() {
            return Subspace::full(self.fp(), n);
        }
        let mut blocks: Option<FpMatrix> = None;
        for g in a.generators() {
            let act = self.act_matrix(g);
            let lx = self.c.mul_operator(g);
            let m = self.matrix_of(n, |v| self.bracket_with(&act, &lx, v));
            blocks = Some(match blocks {
                None => m,
                Some(b) => b.vstack(&m).unwrap(),
            });
        }
        Subspace::span(self.fp(), n, blocks.unwrap().kernel_basis())
    }

    /// `Der_A(C, M)`: Leibniz on generator/basis pairs, `D(1) = 0` and `D(a) = 0`
    /// on the generators of `a`.
    pub fn derivations(&self, a: &Subalgebra) -> Subspace {
        let fp = self.fp();
        let n = self.dim();
        let d = self.source_dim();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let brs = self.generator_brackets();
        for (g, br) in self.c.generators().iter().zip(&brs) {
            // Leibniz at (g, b_j) reads [g, D](b_j) + b_j D(g) = 0
            let m = self.matrix_of(n, |v| {
                let b = br.apply(v);
                let dg = self.eval(v, g);
                let mut out = Vec::with_capacity(n);
                for j in 0..d {
                    let bj_dg = self.basis_acts[j].mul_vec(&dg).unwrap();
                    let blk = &b[j * self.target_dim()..(j + 1) * self.target_dim()];
                    out.extend(blk.iter().zip(&bj_dg).map(|(&x, &y)| fp.add(x, y)));
                }
                out
            });
            rows.extend(m.to_rows());
        }
        let one = self.c.one();
        let m1 = self.matrix_of(self.target_dim(), |v| self.eval(v, &one));
        rows.extend(m1.to_rows());
        for a in a.generators() {
            let ma = self.matrix_of(self.target_dim(), |v| self.eval(v, a));
            rows.extend(ma.to_rows());
        }
        let m = FpMatrix::from_rows(fp, n, &rows).unwrap();
        Subspace::span(fp, n, m.kernel_basis())
    }

    /// `Diff^j_A(C, M)` for `j = 0..=kmax` by the bracket recursion
    /// `D in Diff^j  iff  [g, D] in Diff^{j-1}` for every generator `g`,
    /// solved inside `Hom_A(C, M)`. Stops early once the filtration fills `Hom_A`.
    pub fn diff_bracket(&self, a: &Subalgebra, kmax: usize) -> Vec<Subspace> {
        let hom = self.hom_over(a);
        let n = self.dim();
        let brs = self.generator_brackets();
        let images: Vec<Vec<Vec<u32>>> = hom
            .basis()
            .iter()
            .map(|h| brs.iter().map(|b| b.apply(h)).collect())
            .collect();
        let mut prev = Subspace::zero(self.fp(), n);
        let mut out = Vec::with_capacity(kmax + 1);
        for _ in 0..=kmax {
            if prev == hom {
                out.push(prev.clone());
                continue;
            }
            let cols: Vec<Vec<u32>> = images
                .iter()
                .map(|imgs| imgs.iter().flat_map(|w| prev.reduce(w)).collect())
                .collect();
            let next = if cols.is_empty() {
                Subspace::zero(self.fp(), n)
            } else {
                let m = FpMatrix::from_columns(self.fp(), n * brs.len(), &cols).unwrap();
                Subspace::span(self.fp(), n, m.kernel_basis().iter().map(|y| hom.combine(y)))
            };
            out.push(next.clone());
            prev = next;
        }
        out
    }

    /// Least `n` such that every `(n+1)`-fold bracket of `D` with generators
    /// vanishes, searched up to `limit`.
    pub fn order_of(&self, v: &[u32], limit: usize) -> Option<usize> {
        let brs = self.generator_brackets();
        let mut w = Subspace::span(self.fp(), self.dim(), [v.to_vec()]);
        if w.dim() == 0 {
            return Some(0);
        }
        for n in 0..=limit {
            let next: Vec<Vec<u32>> = w
                .basis()
                .iter()
                .flat_map(|b| brs.iter().map(move |br| br.apply(b)))
                .collect();
            w = Subspace::span(self.fp(), self.dim(), next);
            if w.dim() == 0 {
                return Some(n);
            }
        }
        None
    }

    /// `r p^e - 1` with `r` the number of generators and `e` the exponent;
    /// every `A`-linear map has order at most this.
    pub fn order_limit(&self, exponent: usize) -> usize {
        let r = self.c.generators().len().max(1);
        let pe = (self.fp().p() as usize).saturating_pow(exponent as u32);
        (r.saturating_mul(pe)).saturating_sub(1)
    }
}

/// Bracket with a fixed element, with its matrices prepared.
pub struct Bracketer<'a> {
    space: &'a OpSpace,
    act: FpMatrix,
    mul: SparseCols,
}

impl Bracketer<'_> {
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.space.bracket_with(&self.act, &self.mul, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presented;

    fn end_space(p: u32, e: u32) -> OpSpace {
        OpSpace::endomorphisms(Arc::new(presented(p, &["x"], &[e], &["0"]).unwrap()))
    }

    fn partial_f2() -> (OpSpace, Vec<u32>) {
        let s = end_space(2, 1);
        // d(1) = 0, d(x) = 1
        let d = s.flatten(&FpMatrix::from_rows(s.fp(), 2, &[vec![0, 1], vec![0, 0]]).unwrap());
        (s, d)
    }

    #[test]
    fn bracket_with_constant_vanishes() {
        let (s, d) = partial_f2();
        let one = s.algebra().one();
        assert!(FiniteAlgebra::is_zero(&s.bracket(&one, &d)));
    }

    #[test]
    fn bracket_of_partial_is_identity() {
        let (s, d) = partial_f2();
        let x = s.algebra().generators()[0].clone();
        let b = s.bracket(&x, &d);
        assert_eq!(s.to_matrix(&b), FpMatrix::identity(s.fp(), 2));
        assert!(FiniteAlgebra::is_zero(&s.bracket(&x, &b)));
        assert_eq!(s.order_of(&d, 3), Some(1));
    }

    #[test]
    fn development_small_case() {
        let (s, d) = partial_f2();
        let x = s.algebra().generators()[0].clone();
        let one = s.algebra().one();
        let v = s.bracket_development(&[x.clone(), x.clone()], &d, &one).unwrap();
        assert_eq!(v, vec![0, 0]);
        let single = s.bracket_development(std::slice::from_ref(&x), &d, &x).unwrap();
        assert_eq!(single, s.eval(&s.bracket(&x, &d), &x));
    }

    #[test]
    fn multiplication_has_order_zero() {
        let s = end_space(3, 1);
        let x = s.algebra().generators()[0].clone();
        let m = s.flatten(&s.algebra().mul_matrix(&x));
        assert_eq!(s.order_of(&m, 5), Some(0));
        let zero = vec![0u32; s.dim()];
        assert_eq!(s.order_of(&zero, 5), Some(0));
    }

    #[test]
    fn derivations_of_truncated_line() {
        let s = end_space(2, 1);
        let a = Subalgebra::prime_field(s.algebra());
        assert_eq!(s.derivations(&a).dim(), 2);
        let s3 = end_space(3, 1);
        let a3 = Subalgebra::prime_field(s3.algebra());
        let der = s3.derivations(&a3);
        assert_eq!(der.dim(), 3);
        // free of rank one on d/dx: the C-span of d/dx is everything
        let dx = s3.flatten(&FpMatrix::from_rows(s3.fp(), 3, &[vec![0, 1, 0], vec![0, 0, 2], vec![0, 0, 0]]).unwrap());
        assert!(der.contains(&dx));
    }

    #[test]
    fn diff_filtrations() {
        let s = end_space(3, 1);
        let a = Subalgebra::prime_field(s.algebra());
        let dims: Vec<usize> = s.diff_bracket(&a, 2).iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 6, 9]);
        let s2 = end_space(2, 1);
        let a2 = Subalgebra::prime_field(s2.algebra());
        let dims2: Vec<usize> = s2.diff_bracket(&a2, 1).iter().map(Subspace::dim).collect();
        assert_eq!(dims2, vec![2, 4]);
    }
}
