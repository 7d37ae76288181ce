use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{FpMatrix, SparseCols};
use crate::modules::CModule;

use super::ops::DiffOperator;

/// A family `x_1..x_n` of `C` with `x_i^p in B` whose reduced monomials
/// `x^alpha` (`alpha in [0,p)^n`) form a `B`-basis of `C`.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    c: Arc<FiniteAlgebra>,
    base: Subalgebra,
    xs: Vec<Vec<u32>>,
    /// `x^alpha` with `alpha` encoded as `sum alpha_i p^i`.
    monomials: Vec<Vec<u32>>,
    /// Coordinates in the basis `{s_l x^alpha}`, pair index `m * dim B + l`.
    to_pairs: FpMatrix,
}

impl MonomialBasis {
    /// `Ok(None)` when the monomials are not a `B`-basis; an error when some
    /// `x_i^p` lies outside `B`.
    pub fn new(c: Arc<FiniteAlgebra>, base: &Subalgebra, xs: &[Vec<u32>]) -> Result<Option<Self>> {
        let p = c.p() as usize;
        for x in xs {
            if !base.contains(&c.frobenius_power(x, 1)) {
                return Err(Error::precondition("p-th power of a candidate lies outside the base"));
            }
        }
        let n = xs.len();
        let nmon = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if nmon.saturating_mul(base.dim() as u64) != c.dim() as u64 {
            return Ok(None);
        }
        let nmon = nmon as usize;
        let ops: Vec<SparseCols> = xs.iter().map(|x| c.mul_operator(x)).collect();
        let mut monomials = vec![c.one()];
        for (i, op) in ops.iter().enumerate() {
            let stride = p.pow(i as u32);
            for k in 1..p {
                for a in 0..stride {
                    let next = op.apply(&monomials[(k - 1) * stride + a]);
                    monomials.push(next);
                }
            }
        }
        debug_assert_eq!(monomials.len(), nmon);
        let mut cols = Vec::with_capacity(c.dim());
        for m in &monomials {
            for s in base.basis() {
                cols.push(c.mul(s, m));
            }
        }
        let mat = FpMatrix::from_columns(c.fp(), c.dim(), &cols)?;
        let Some(to_pairs) = mat.inverse() else {
            return Ok(None);
        };
        Ok(Some(MonomialBasis {
            c,
            base: base.clone(),
            xs: xs.to_vec(),
            monomials,
            to_pairs,
        }))
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.c
    }

    pub fn base(&self) -> &Subalgebra {
        &self.base
    }

    pub fn xs(&self) -> &[Vec<u32>] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn monomial(&self, alpha: &[usize]) -> &[u32] {
        &self.monomials[self.encode(alpha)]
    }

    fn p(&self) -> usize {
        self.c.p() as usize
    }

    fn encode(&self, alpha: &[usize]) -> usize {
        let p = self.p();
        alpha.iter().rev().fold(0, |acc, &a| acc * p + a)
    }

    fn decode(&self, m: usize) -> Vec<usize> {
        let p = self.p();
        (0..self.len()).map(|i| (m / p.pow(i as u32)) % p).collect()
    }

    /// `lambda_alpha` in the echelon coordinates of `B`, one per monomial.
    pub fn decompose(&self, v: &[u32]) -> Vec<Vec<u32>> {
        let s = self.base.dim();
        let coords = self.to_pairs.mul_vec(v).expect("algebra dimension");
        coords.chunks(s).map(|c| c.to_vec()).collect()
    }

    /// `d_beta(lambda x^alpha) = lambda binom(alpha, beta) x^{alpha - beta}`,
    /// with certified order `|beta|`.
    pub fn partial(&self, beta: &[usize]) -> Result<DiffOperator> {
        let p = self.p();
        if beta.len() != self.len() || beta.iter().any(|&b| b >= p) {
            return Err(Error::precondition("multi-index outside [0, p)^n"));
        }
        let c = &self.c;
        let fp = c.fp();
        let s = self.base.dim();
        let mut cols = Vec::with_capacity(c.dim());
        for j in 0..c.dim() {
            let lambdas = self.decompose(&c.basis_vector(j));
            let mut out = c.zero();
            for (m, lam) in lambdas.iter().enumerate() {
                if lam.iter().all(|&x| x == 0) {
                    continue;
                }
                let alpha = self.decode(m);
                if alpha.iter().zip(beta).any(|(a, b)| a < b) {
                    continue;
                }
                let coeff = alpha
                    .iter()
                    .zip(beta)
                    .fold(1u32, |acc, (&a, &b)| fp.mul(acc, fp.binomial(a as u64, b as u64)));
                if coeff == 0 {
                    continue;
                }
                let lower: Vec<usize> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
                let lam_el = self.base.embed(lam);
                let term = c.mul(&lam_el, self.monomial(&lower));
                out = c.add(&out, &c.scale(coeff, &term));
            }
            debug_assert_eq!(s, self.base.dim());
            cols.push(out);
        }
        let matrix = FpMatrix::from_columns(fp, c.dim(), &cols)?;
        Ok(DiffOperator::new(matrix, Some(beta.iter().sum())))
    }

    /// `d_1, ..., d_n`.
    pub fn partials(&self) -> Result<Vec<DiffOperator>> {
        (0..self.len())
            .map(|i| {
                let mut beta = vec![0; self.len()];
                beta[i] = 1;
                self.partial(&beta)
            })
            .collect()
    }

    /// `ext(d)(sum lambda_alpha x^alpha) = sum x^alpha d(lambda_alpha)` for an
    /// operator `d : B -> M` given in the echelon coordinates of `B`, where `M`
    /// is a module over `C`. The bound is `p k` for `d` of bound `k`.
    pub fn extend(&self, m: &CModule, inner: &DiffOperator) -> Result<DiffOperator> {
        let c = &self.c;
        if inner.matrix.cols() != self.base.dim() || inner.matrix.rows() != m.dim() {
            return Err(Error::precondition("operator does not map the base into the module"));
        }
        let fp = c.fp();
        let acts: Vec<SparseCols> = self.monomials.iter().map(|x| m.action_operator(x)).collect();
        let mut cols = Vec::with_capacity(c.dim());
        for j in 0..c.dim() {
            let lambdas = self.decompose(&c.basis_vector(j));
            let mut out = vec![0u32; m.dim()];
            for (mi, lam) in lambdas.iter().enumerate() {
                if lam.iter().all(|&x| x == 0) {
                    continue;
                }
                let w = acts[mi].apply(&inner.matrix.mul_vec(lam)?);
                for (o, y) in out.iter_mut().zip(w) {
                    *o = fp.add(*o, y);
                }
            }
            cols.push(out);
        }
        let matrix = FpMatrix::from_columns(fp, m.dim(), &cols)?;
        let bound = inner.bound.map(|k| k.saturating_mul(self.p()));
        Ok(DiffOperator::new(matrix, bound))
    }
}

/// `Delta_alpha(x^beta) = binom(beta, alpha) x^{beta - alpha}` on a split
/// presented algebra, with certified order `|alpha|`.
pub fn delta_alpha(c: &FiniteAlgebra, alpha: &[usize]) -> Result<DiffOperator> {
    let pres = c
        .presentation()
        .ok_or_else(|| Error::precondition("delta operators need a presented algebra"))?;
    if !pres.is_split() {
        return Err(Error::precondition("delta operators need a split presentation"));
    }
    let orders = pres.orders();
    if alpha.len() != orders.len() || alpha.iter().zip(&orders).any(|(&a, &q)| a as u64 >= q) {
        return Err(Error::precondition("multi-index outside the exponent bounds"));
    }
    let fp = c.fp();
    let d = c.dim();
    let mut m = FpMatrix::zeros(fp, d, d);
    for t in 0..d {
        let beta = c.monomial_exponents(t).expect("presented");
        if beta.iter().zip(alpha).any(|(b, a)| b < a) {
            continue;
        }
        let coeff = beta
            .iter()
            .zip(alpha)
            .fold(1u32, |acc, (&b, &a)| fp.mul(acc, fp.binomial(b as u64, a as u64)));
        let lower: Vec<usize> = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
        m.set(c.monomial_index(&lower).expect("reduced"), t, coeff);
    }
    Ok(DiffOperator::new(m, Some(alpha.iter().sum())))
}

/// Restriction of `D : C -> M` to a subalgebra, in its echelon coordinates,
/// with certified bound `floor(bound / p)`.
pub fn restrict(c: &FiniteAlgebra, sub: &Subalgebra, d: &DiffOperator) -> DiffOperator {
    let cols: Vec<Vec<u32>> = sub.basis().iter().map(|b| d.apply(b)).collect();
    let matrix = FpMatrix::from_columns(c.fp(), d.matrix.rows(), &cols).expect("shape");
    DiffOperator::new(matrix, d.bound.map(|k| k / c.p() as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{element, presented};
    use crate::diffcalc::OpSpace;

    fn line(p: u32, e: u32) -> Arc<FiniteAlgebra> {
        Arc::new(presented(p, &["x"], &[e], &["0"]).unwrap())
    }

    #[test]
    fn partial_on_radical_extension() {
        // F_3[b, x] / (b^3, x^3 - b) over B = F_3[b]
        let c = Arc::new(presented(3, &["b", "x"], &[1, 1], &["0", "b"]).unwrap());
        let b = c.generators()[0].clone();
        let x = c.generators()[1].clone();
        let base = Subalgebra::generated(&c, &[b], None);
        let mb = MonomialBasis::new(c.clone(), &base, std::slice::from_ref(&x))
            .unwrap()
            .unwrap();
        let d = &mb.partials().unwrap()[0];
        let x2 = c.mul(&x, &x);
        assert_eq!(d.apply(&x2), c.scale(2, &x));
        assert_eq!(d.apply(&x), c.one());
        assert_eq!(mb.partial(&[0]).unwrap().matrix, FpMatrix::identity(c.fp(), 9));
    }

    #[test]
    fn delta_examples() {
        let c = line(3, 2);
        let x4 = element(&c, "x^4").unwrap();
        let d2 = delta_alpha(&c, &[2]).unwrap();
        assert!(FiniteAlgebra::is_zero(&d2.apply(&x4)));
        let c3 = line(3, 1);
        let d1 = delta_alpha(&c3, &[1]).unwrap();
        let space = OpSpace::endomorphisms(c3.clone());
        assert_eq!(space.order_of(&space.flatten(&d1.matrix), 5), Some(1));
        assert_eq!(delta_alpha(&c3, &[0]).unwrap().matrix, FpMatrix::identity(c3.fp(), 3));
    }

    #[test]
    fn restriction_examples() {
        let c = line(3, 2);
        let x3 = element(&c, "x^3").unwrap();
        let sub = Subalgebra::generated(&c, std::slice::from_ref(&x3), None);
        let r1 = restrict(&c, &sub, &delta_alpha(&c, &[1]).unwrap());
        assert!(r1.is_zero());
        let d3 = delta_alpha(&c, &[3]).unwrap();
        assert_eq!(d3.apply(&element(&c, "x^6").unwrap()), c.scale(2, &x3));
        let r3 = restrict(&c, &sub, &d3);
        assert_eq!(r3.apply(&sub.project(&x3)), c.one());
        assert_eq!(r3.bound, Some(1));
    }

    #[test]
    fn extension_of_derivative() {
        let c = line(3, 2);
        let x = c.generators()[0].clone();
        let x3 = element(&c, "x^3").unwrap();
        let sub = Subalgebra::generated(&c, std::slice::from_ref(&x3), None);
        let mb = MonomialBasis::new(c.clone(), &sub, std::slice::from_ref(&x))
            .unwrap()
            .unwrap();
        // d/du on k[u]/(u^3), u = x^3, mapping into C
        let d3 = delta_alpha(&c, &[3]).unwrap();
        let inner = restrict(&c, &sub, &d3);
        let m = CModule::regular(c.clone());
        let ext = mb.extend(&m, &inner).unwrap();
        assert_eq!(ext.apply(&x3), c.one());
        assert_eq!(ext.apply(&element(&c, "x^4").unwrap()), x);
        assert_eq!(ext.apply(&element(&c, "x^5").unwrap()), element(&c, "x^2").unwrap());
        let space = OpSpace::endomorphisms(c.clone());
        let ord = space.order_of(&space.flatten(&ext.matrix), 8).unwrap();
        assert!(ord <= 3);
        assert_eq!(restrict(&c, &sub, &ext).matrix, inner.matrix);
    }
}
