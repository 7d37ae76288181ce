//! Finite modules over finite local F_p-algebras: minimal generators,
//! freeness and direct summands.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{unit, Echelon, Fp, FpMatrix, SparseCols, Subspace};

/// Above this many unknowns the general retraction system is refused.
pub const GENERAL_SUMMAND_LIMIT: usize = 40_000;

/// A finite-dimensional F_p-space with an action of a finite algebra, given by
/// one operator per designated generator of the ring.
#[derive(Clone, Debug)]
pub struct CModule {
    ring: Arc<FiniteAlgebra>,
    dim: usize,
    gen_actions: Vec<SparseCols>,
    m_times: OnceLock<Subspace>,
    free_rank: OnceLock<Option<usize>>,
}

impl CModule {
    /// Wraps generator actions after checking they commute and satisfy the
    /// relations of the ring (every word acts as its product).
    pub fn new(ring: Arc<FiniteAlgebra>, dim: usize, gen_actions: Vec<SparseCols>) -> Result<Self> {
        let m = Self::new_unchecked(ring, dim, gen_actions)?;
        m.check_action()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(ring: Arc<FiniteAlgebra>, dim: usize, gen_actions: Vec<SparseCols>) -> Result<Self> {
        if gen_actions.len() != ring.generators().len() {
            return Err(Error::structural("one action per ring generator is required"));
        }
        if gen_actions.iter().any(|a| a.rows() != dim || a.ncols() != dim) {
            return Err(Error::structural(
                "action matrices must be square of the module dimension",
            ));
        }
        Ok(Self::build(ring, dim, gen_actions))
    }

    fn build(ring: Arc<FiniteAlgebra>, dim: usize, gen_actions: Vec<SparseCols>) -> Self {
        CModule {
            ring,
            dim,
            gen_actions,
            m_times: OnceLock::new(),
            free_rank: OnceLock::new(),
        }
    }

    /// The ring acting on itself.
    pub fn regular(ring: Arc<FiniteAlgebra>) -> Self {
        let d = ring.dim();
        let acts = (0..ring.generators().len())
            .map(|i| ring.generator_operator(i).clone())
            .collect();
        Self::build(ring, d, acts)
    }

    /// `R^r` with blocks ordered by summand.
    pub fn free(ring: Arc<FiniteAlgebra>, r: usize) -> Self {
        let d = ring.dim();
        let acts = (0..ring.generators().len())
            .map(|i| {
                let op = ring.generator_operator(i);
                let mut cols = Vec::with_capacity(d * r);
                for b in 0..r {
                    for j in 0..d {
                        cols.push(op.column(j).iter().map(|&(k, a)| (k + (b * d) as u32, a)).collect());
                    }
                }
                SparseCols::from_sparse_columns(ring.fp(), d * r, cols)
            })
            .collect();
        Self::build(ring, d * r, acts)
    }

    pub fn zero(ring: Arc<FiniteAlgebra>) -> Self {
        let fp = ring.fp();
        let acts = (0..ring.generators().len())
            .map(|_| SparseCols::from_sparse_columns(fp, 0, Vec::new()))
            .collect();
        Self::build(ring, 0, acts)
    }

    /// A subalgebra `T` of `c` as a module over a smaller subalgebra `S`, both
    /// in owner coordinates; the result lives in `T`'s echelon coordinates.
    pub fn of_subalgebra_pair(c: &FiniteAlgebra, top: &Subalgebra, base: &Subalgebra) -> Result<Self> {
        if !top.contains_subalgebra(base) {
            return Err(Error::precondition("base is not contained in the top algebra"));
        }
        let ring = Arc::new(base.to_algebra(c));
        let acts = base
            .generators()
            .iter()
            .map(|g| {
                let cols: Vec<Vec<u32>> = top.basis().iter().map(|b| top.project(&c.mul(g, b))).collect();
                SparseCols::from_dense_columns(c.fp(), top.dim(), &cols)
            })
            .collect();
        Self::new_unchecked(ring, top.dim(), acts)
    }

    /// Restriction of scalars along the subalgebra `sub` of the acting ring.
    pub fn restrict_scalars(&self, sub: &Subalgebra) -> Result<Self> {
        let ring = Arc::new(sub.to_algebra(&self.ring));
        let acts = sub.generators().iter().map(|g| self.action_operator(g)).collect();
        Self::new_unchecked(ring, self.dim, acts)
    }

    pub fn ring(&self) -> &Arc<FiniteAlgebra> {
        &self.ring
    }

    pub fn fp(&self) -> Fp {
        self.ring.fp()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gen_actions(&self) -> &[SparseCols] {
        &self.gen_actions
    }

    /// `w_t * v` for every word `w_t` of the ring's word basis.
    pub fn orbit(&self, v: &[u32]) -> Vec<Vec<u32>> {
        let wb = self.ring.word_basis();
        let mut out: Vec<Vec<u32>> = Vec::with_capacity(wb.steps.len());
        for step in &wb.steps {
            let next = match step {
                None => v.to_vec(),
                Some((g, s)) => self.gen_actions[*g].apply(&out[*s]),
            };
            out.push(next);
        }
        out
    }

    /// Action of an arbitrary ring element.
    pub fn act(&self, c: &[u32], v: &[u32]) -> Vec<u32> {
        let fp = self.fp();
        let wb = self.ring.word_basis();
        let coeffs = match &wb.to_words {
            Some(m) => m.mul_vec(c).expect("ring dimension"),
            None => c.to_vec(),
        };
        let orbit = self.orbit(v);
        let mut acc = vec![0u32; self.dim];
        for (w, &a) in orbit.iter().zip(&coeffs) {
            if a == 0 {
                continue;
            }
            for (x, &y) in acc.iter_mut().zip(w) {
                if y != 0 {
                    *x = fp.mul_add(*x, a, y);
                }
            }
        }
        acc
    }

    pub fn action_operator(&self, c: &[u32]) -> SparseCols {
        let cols: Vec<Vec<u32>> = (0..self.dim).map(|j| self.act(c, &unit(self.dim, j))).collect();
        SparseCols::from_dense_columns(self.fp(), self.dim, &cols)
    }

    /// Verifies commutation of the generator actions and that each word acts
    /// through the ring product.
    pub fn check_action(&self) -> Result<()> {
        let n = self.gen_actions.len();
        for j in 0..self.dim {
            let e = unit(self.dim, j);
            let imgs: Vec<Vec<u32>> = self.gen_actions.iter().map(|a| a.apply(&e)).collect();
            for a in 0..n {
                for b in a + 1..n {
                    if self.gen_actions[a].apply(&imgs[b]) != self.gen_actions[b].apply(&imgs[a]) {
                        return Err(Error::structural("generator actions do not commute"));
                    }
                }
            }
        }
        // each generator times each word must act like the product
        let wb = self.ring.word_basis();
        for j in 0..self.dim {
            let orbit = self.orbit(&unit(self.dim, j));
            for (g, gv) in self.ring.generators().iter().enumerate() {
                for (t, w) in wb.words.iter().enumerate() {
                    let prod = self.ring.mul(gv, w);
                    if self.act(&prod, &unit(self.dim, j)) != self.gen_actions[g].apply(&orbit[t]) {
                        return Err(Error::structural("action does not respect the ring relations"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest submodule containing `seeds`.
    pub fn generated(&self, seeds: &[Vec<u32>]) -> Subspace {
        let mut ech = Echelon::new(self.fp(), self.dim);
        let mut queue: Vec<Vec<u32>> = Vec::new();
        for s in seeds {
            if ech.insert(s.clone()) {
                queue.push(s.clone());
            }
        }
        let mut head = 0;
        while head < queue.len() {
            for a in &self.gen_actions {
                let w = a.apply(&queue[head]);
                if ech.insert(w.clone()) {
                    queue.push(w);
                }
            }
            head += 1;
        }
        ech.finish()
    }

    pub fn is_stable(&self, s: &Subspace) -> bool {
        s.basis()
            .iter()
            .all(|b| self.gen_actions.iter().all(|a| s.contains(&a.apply(b))))
    }

    /// `m M` for the maximal ideal `m` of a local ring, spanned by
    /// `(g - residue(g)) M` over the ring generators.
    pub fn max_ideal_times(&self) -> Result<Subspace> {
        self.ring.require_local()?;
        Ok(self
            .m_times
            .get_or_init(|| {
                let fp = self.fp();
                let mut ech = Echelon::new(fp, self.dim);
                for (g, a) in self.ring.generators().iter().zip(&self.gen_actions) {
                    let lambda = self.ring.residue(g).unwrap();
                    for j in 0..self.dim {
                        let e = unit(self.dim, j);
                        let mut w = a.apply(&e);
                        w[j] = fp.sub(w[j], lambda);
                        ech.insert(w);
                    }
                }
                ech.finish()
            })
            .clone())
    }

    /// `m S` for a submodule `S`.
    pub fn max_ideal_times_sub(&self, s: &Subspace) -> Result<Subspace> {
        self.ring.require_local()?;
        let fp = self.fp();
        let mut ech = Echelon::new(fp, self.dim);
        for (g, a) in self.ring.generators().iter().zip(&self.gen_actions) {
            let lambda = fp.neg(self.ring.residue(g).unwrap());
            for b in s.basis() {
                let mut w = a.apply(b);
                for (x, &y) in w.iter_mut().zip(b) {
                    *x = fp.mul_add(*x, lambda, y);
                }
                ech.insert(w);
            }
        }
        Ok(ech.finish())
    }

    /// Greedy Nakayama selection in basis order: the standard basis vectors
    /// whose classes span `M / m M`.
    pub fn minimal_generators(&self) -> Result<Vec<Vec<u32>>> {
        let candidates: Vec<Vec<u32>> = (0..self.dim).map(|j| unit(self.dim, j)).collect();
        self.minimal_generators_from(&candidates, None)
    }

    /// Greedy selection from `candidates` of elements whose classes span
    /// `S / m S`, where `S` is `within` (default: the whole module).
    pub fn minimal_generators_from(&self, candidates: &[Vec<u32>], within: Option<&Subspace>) -> Result<Vec<Vec<u32>>> {
        let msub = match within {
            Some(s) => self.max_ideal_times_sub(s)?,
            None => self.max_ideal_times()?,
        };
        let target = within.map(Subspace::dim).unwrap_or(self.dim);
        let mut ech = Echelon::from_subspace(&msub);
        let mut out = Vec::new();
        for c in candidates {
            if ech.dim() == target {
                break;
            }
            if ech.insert(c.clone()) {
                out.push(c.clone());
            }
        }
        if ech.dim() != target {
            return Err(Error::precondition("candidates do not generate the module"));
        }
        Ok(out)
    }

    /// Rank `r` when the module is free, i.e. the minimal generators give an
    /// isomorphism `R^r -> M`.
    pub fn is_free(&self) -> Result<Option<usize>> {
        if let Some(r) = self.free_rank.get() {
            return Ok(*r);
        }
        let r = self.free_basis()?.map(|b| b.len());
        Ok(*self.free_rank.get_or_init(|| r))
    }

    /// A free basis, when one exists.
    pub fn free_basis(&self) -> Result<Option<Vec<Vec<u32>>>> {
        let gens = self.minimal_generators()?;
        Ok(self.verify_free_basis(&gens).then_some(gens))
    }

    /// Whether `gens` is a basis of the module over the ring.
    pub fn verify_free_basis(&self, gens: &[Vec<u32>]) -> bool {
        if self.dim != gens.len() * self.ring.dim() {
            return false;
        }
        let mut ech = Echelon::new(self.fp(), self.dim);
        for g in gens {
            for w in self.orbit(g) {
                if !ech.insert(w) {
                    return false;
                }
            }
        }
        true
    }

    /// Submodule as a standalone module in the echelon coordinates of `s`.
    pub fn submodule(&self, s: &Subspace) -> Result<CModule> {
        if !self.is_stable(s) {
            return Err(Error::precondition("subspace is not stable under the action"));
        }
        let acts = self
            .gen_actions
            .iter()
            .map(|a| {
                let cols: Vec<Vec<u32>> = s.basis().iter().map(|b| s.coords_unchecked(&a.apply(b))).collect();
                SparseCols::from_dense_columns(self.fp(), s.dim(), &cols)
            })
            .collect();
        Self::new_unchecked(self.ring.clone(), s.dim(), acts)
    }

    /// Quotient by a stable subspace, in the non-pivot coordinates of `s`.
    pub fn quotient(&self, s: &Subspace) -> Result<(CModule, QuotientMap)> {
        if !self.is_stable(s) {
            return Err(Error::precondition("subspace is not stable under the action"));
        }
        let q = QuotientMap {
            sub: s.clone(),
            keep: s.free_columns(),
        };
        let acts = self
            .gen_actions
            .iter()
            .map(|a| {
                let cols: Vec<Vec<u32>> = q
                    .keep
                    .iter()
                    .map(|&c| q.project(&a.apply(&unit(self.dim, c))))
                    .collect();
                SparseCols::from_dense_columns(self.fp(), q.keep.len(), &cols)
            })
            .collect();
        Ok((Self::new_unchecked(self.ring.clone(), q.keep.len(), acts)?, q))
    }

    /// A ring-linear retraction of the module onto the stable subspace `s`.
    ///
    /// Over a local ring with a free ambient module the Nakayama criterion
    /// `S ∩ mN = mS` decides, and the retraction is the projection along a
    /// complementary free summand. Otherwise the linear system for the matrix
    /// of the retraction is solved directly.
    pub fn is_direct_summand(&self, s: &Subspace) -> Result<Option<Retraction>> {
        if !self.is_stable(s) {
            return Err(Error::precondition("subspace is not stable under the action"));
        }
        let r = if self.ring.is_local() && self.is_free()?.is_some() {
            self.summand_local_free(s)?
        } else {
            self.summand_general(s)?
        };
        if let Some(ret) = &r {
            if !ret.verify(self, s) {
                return Err(Error::Route("retraction failed verification".into()));
            }
        }
        Ok(r)
    }

    /// Decides summands of a free module over a local ring by Nakayama,
    /// `S ∩ mN = mS`, without building a retraction. `None` when the module is
    /// not free or the ring is not local.
    pub fn summand_criterion(&self, s: &Subspace) -> Result<Option<bool>> {
        if !self.ring.is_local() || self.is_free()?.is_none() {
            return Ok(None);
        }
        if !self.is_stable(s) {
            return Err(Error::precondition("subspace is not stable under the action"));
        }
        let m_s = self.max_ideal_times_sub(s)?;
        Ok(Some(s.intersect(&self.max_ideal_times()?) == m_s))
    }

    fn summand_local_free(&self, s: &Subspace) -> Result<Option<Retraction>> {
        let m_s = self.max_ideal_times_sub(s)?;
        let m_n = self.max_ideal_times()?;
        if s.intersect(&m_n) != m_s {
            return Ok(None);
        }
        let s_gens = self.minimal_generators_from(s.basis(), Some(s))?;
        let mut ech = Echelon::from_subspace(&m_n);
        for g in &s_gens {
            ech.insert(g.clone());
        }
        let mut comp = Vec::new();
        for j in 0..self.dim {
            if ech.insert(unit(self.dim, j)) {
                comp.push(unit(self.dim, j));
            }
        }
        let mut columns: Vec<Vec<u32>> = Vec::with_capacity(self.dim);
        for g in &s_gens {
            columns.extend(self.orbit(g));
        }
        let split = columns.len();
        for g in &comp {
            columns.extend(self.orbit(g));
        }
        let basis = FpMatrix::from_columns(self.fp(), self.dim, &columns)?;
        let inv = basis
            .inverse()
            .ok_or_else(|| Error::Route("summand basis is not invertible".into()))?;
        // keep only the coordinates along the S-part
        let s_part = FpMatrix::from_columns(self.fp(), self.dim, &columns[..split])?;
        let coords = FpMatrix::from_rows(self.fp(), self.dim, &inv.to_rows()[..split])?;
        let proj = s_part.mul(&coords)?;
        Ok(Some(Retraction { projection: proj }))
    }

    fn summand_general(&self, s: &Subspace) -> Result<Option<Retraction>> {
        let n = self.dim;
        let k = s.dim();
        let unknowns = k * n;
        if unknowns > GENERAL_SUMMAND_LIMIT {
            return Err(Error::Resource(format!(
                "direct summand system with {unknowns} unknowns exceeds {GENERAL_SUMMAND_LIMIT}"
            )));
        }
        let fp = self.fp();
        // unknown R (k x n) in S-coordinates, variable index i * n + j
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut rhs: Vec<u32> = Vec::new();
        for (c, b) in s.basis().iter().enumerate() {
            for i in 0..k {
                let mut row = vec![0u32; unknowns];
                for (j, &x) in b.iter().enumerate() {
                    row[i * n + j] = x;
                }
                rows.push(row);
                rhs.push(u32::from(i == c));
            }
        }
        for a in &self.gen_actions {
            // R * A_g = A_g|S * R
            let sub_act: Vec<Vec<u32>> = s.basis().iter().map(|b| s.coords_unchecked(&a.apply(b))).collect();
            for j in 0..n {
                let col = a.apply(&unit(n, j));
                for i in 0..k {
                    let mut row = vec![0u32; unknowns];
                    for (l, &x) in col.iter().enumerate() {
                        if x != 0 {
                            row[i * n + l] = fp.add(row[i * n + l], x);
                        }
                    }
                    for (m, sa) in sub_act.iter().enumerate() {
                        let y = sa[i];
                        if y != 0 {
                            row[m * n + j] = fp.sub(row[m * n + j], y);
                        }
                    }
                    rows.push(row);
                    rhs.push(0);
                }
            }
        }
        let a = FpMatrix::from_rows(fp, unknowns, &rows)?;
        let Some(x) = a.solve(&rhs)? else {
            return Ok(None);
        };
        let mut proj = FpMatrix::zeros(fp, n, n);
        for j in 0..n {
            let coords: Vec<u32> = (0..k).map(|i| x[i * n + j]).collect();
            let v = s.combine(&coords);
            for (i, &y) in v.iter().enumerate() {
                proj.set(i, j, y);
            }
        }
        Ok(Some(Retraction { projection: proj }))
    }
}

/// Projection onto the non-pivot coordinates of a subspace.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub sub: Subspace,
    pub keep: Vec<usize>,
}

impl QuotientMap {
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let r = self.sub.reduce(v);
        self.keep.iter().map(|&c| r[c]).collect()
    }

    /// A representative with zeros on the pivot coordinates.
    pub fn lift(&self, q: &[u32]) -> Vec<u32> {
        let mut v = vec![0u32; self.sub.ambient()];
        for (&c, &x) in self.keep.iter().zip(q) {
            v[c] = x;
        }
        v
    }
}

/// A ring-linear idempotent endomorphism of the ambient module with image the
/// summand; as a map onto the summand it is the retraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retraction {
    pub projection: FpMatrix,
}

impl Retraction {
    /// Identity on `s`, image inside `s`, and commutes with the action.
    pub fn verify(&self, m: &CModule, s: &Subspace) -> bool {
        let p = &self.projection;
        let fp = m.fp();
        let cols: Vec<Vec<u32>> = (0..m.dim()).map(|j| p.column(j)).collect();
        let apply = |v: &[u32]| {
            let mut out = vec![0u32; m.dim()];
            for (col, &x) in cols.iter().zip(v) {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(col) {
                        *o = fp.mul_add(*o, x, y);
                    }
                }
            }
            out
        };
        if s.basis().iter().any(|b| apply(b) != *b) {
            return false;
        }
        for (j, pe) in cols.iter().enumerate() {
            if !s.contains(pe) {
                return false;
            }
            let e = unit(m.dim(), j);
            if m.gen_actions().iter().any(|a| apply(&a.apply(&e)) != a.apply(pe)) {
                return false;
            }
        }
        true
    }

    /// Matrix of the retraction `N -> S` in the echelon coordinates of `s`.
    pub fn onto(&self, s: &Subspace) -> FpMatrix {
        let n = self.projection.cols();
        let cols: Vec<Vec<u32>> = (0..n).map(|j| s.coords_unchecked(&self.projection.column(j))).collect();
        FpMatrix::from_columns(self.projection.fp(), s.dim(), &cols).expect("shape")
    }
}

/// Serializable summary of a freeness check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessSummary {
    pub module_dim: usize,
    pub ring_dim: usize,
    pub minimal_generators: usize,
    pub free: bool,
}

impl FreenessSummary {
    pub fn of(m: &CModule) -> Result<Self> {
        let gens = m.minimal_generators()?;
        Ok(FreenessSummary {
            module_dim: m.dim(),
            ring_dim: m.ring().dim(),
            minimal_generators: gens.len(),
            free: m.verify_free_basis(&gens),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{presented, Subalgebra};

    fn pair(c: &FiniteAlgebra, seed: &[Vec<u32>]) -> CModule {
        let b = Subalgebra::generated(c, seed, None);
        CModule::of_subalgebra_pair(c, &Subalgebra::whole(c), &b).unwrap()
    }

    #[test]
    fn regular_module_generated_by_one() {
        let c = Arc::new(presented(2, &["x"], &[2], &["0"]).unwrap());
        let m = CModule::regular(c.clone());
        assert_eq!(m.minimal_generators().unwrap(), vec![c.one()]);
        assert_eq!(m.is_free().unwrap(), Some(1));
        m.check_action().unwrap();
    }

    #[test]
    fn zero_module() {
        let c = Arc::new(presented(2, &["x"], &[1], &["0"]).unwrap());
        let m = CModule::zero(c);
        assert!(m.minimal_generators().unwrap().is_empty());
        assert_eq!(m.is_free().unwrap(), Some(0));
    }

    #[test]
    fn not_free_over_xy() {
        let c = presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap();
        let xy = c.mul(&c.generators()[0], &c.generators()[1]);
        let m = pair(&c, &[xy]);
        assert_eq!(m.minimal_generators().unwrap().len(), 3);
        assert_eq!(m.is_free().unwrap(), None);
    }

    #[test]
    fn free_over_cubes() {
        let c = presented(3, &["x"], &[2], &["0"]).unwrap();
        let x3 = c.pow(&c.generators()[0], 3);
        let m = pair(&c, &[x3]);
        assert_eq!(m.is_free().unwrap(), Some(3));
    }

    #[test]
    fn maximal_ideal_is_not_a_summand() {
        let c = Arc::new(presented(2, &["x"], &[1], &["0"]).unwrap());
        let m = CModule::regular(c.clone());
        let ideal = Subspace::span(c.fp(), 2, [c.generators()[0].clone()]);
        assert!(m.is_direct_summand(&ideal).unwrap().is_none());
        assert!(m.summand_general(&ideal).unwrap().is_none());
        let all = Subspace::full(c.fp(), 2);
        let r = m.is_direct_summand(&all).unwrap().unwrap();
        assert_eq!(r.projection, FpMatrix::identity(c.fp(), 2));
    }

    #[test]
    fn summand_routes_agree_on_free_module() {
        let c = Arc::new(presented(3, &["x"], &[1], &["0"]).unwrap());
        let m = CModule::free(c.clone(), 2);
        let x = &c.generators()[0];
        // S generated by (1, x) is a summand, S generated by (x, 0) is not
        let mut v = c.one();
        v.extend(x.iter().copied());
        let s = m.generated(&[v]);
        assert!(m.is_direct_summand(&s).unwrap().is_some());
        assert!(m.summand_general(&s).unwrap().is_some());
        let mut w = x.clone();
        w.extend(c.zero());
        let t = m.generated(&[w]);
        assert!(m.is_direct_summand(&t).unwrap().is_none());
        assert!(m.summand_general(&t).unwrap().is_none());
    }

    #[test]
    fn quotient_dimensions() {
        let c = Arc::new(presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap());
        let m = CModule::regular(c.clone());
        let (q0, _) = m.quotient(&Subspace::zero(c.fp(), 4)).unwrap();
        assert_eq!(q0.dim(), 4);
        let (q1, _) = m.quotient(&Subspace::full(c.fp(), 4)).unwrap();
        assert_eq!(q1.dim(), 0);
        let mm = m.max_ideal_times().unwrap();
        let (q, map) = m.quotient(&mm).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(map.project(&c.one()), vec![1]);
        q.check_action().unwrap();
    }

    #[test]
    fn non_local_ring_is_rejected_for_generators() {
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
        let m = CModule::regular(Arc::new(k));
        assert!(matches!(
            m.minimal_generators(),
            Err(Error::NotLocal { witness: Some(_) })
        ));
    }
}
