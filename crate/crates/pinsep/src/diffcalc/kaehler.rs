use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{FpMatrix, SparseCols, Subspace};
use crate::modules::CModule;

use super::tensor::TensorSquare;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KaehlerRoute {
    /// `J / J^2` inside the tensor square.
    Quotient,
    /// `C^n` modulo `dP_i` and `da` for the generators of `A`.
    Presentation,
}

/// `Omega_{C/A}` with the universal derivation.
#[derive(Clone, Debug)]
pub struct Kaehler {
    pub module: CModule,
    /// `dim Omega x dim C`, column `j` is `d b_j`.
    pub d: FpMatrix,
    pub route: KaehlerRoute,
}

impl Kaehler {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn differential(&self, x: &[u32]) -> Vec<u32> {
        self.d.mul_vec(x).expect("source dimension")
    }
}

pub fn kaehler(c: Arc<FiniteAlgebra>, a: &Subalgebra, route: KaehlerRoute) -> Result<Kaehler> {
    match route {
        KaehlerRoute::Quotient => kaehler_quotient(c, a),
        KaehlerRoute::Presentation => kaehler_presentation(c, a),
    }
}

fn kaehler_quotient(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<Kaehler> {
    let square = TensorSquare::general(c.clone(), a);
    let powers = square.ideal_powers(2);
    let (q, qm) = square.ambient().quotient(&powers[2])?;
    let s = Subspace::span(c.fp(), q.dim(), powers[1].basis().iter().map(|v| qm.project(v)));
    let module = q.submodule(&s)?;
    let cols: Vec<Vec<u32>> = (0..c.dim())
        .map(|j| s.coords_unchecked(&qm.project(&square.sub_pure(&c.basis_vector(j)))))
        .collect();
    let d = FpMatrix::from_columns(c.fp(), module.dim(), &cols)?;
    Ok(Kaehler {
        module,
        d,
        route: KaehlerRoute::Quotient,
    })
}

/// Formal differential of an element in reduced-monomial coordinates, as a
/// vector of `C^n` (block `i` is the `dx_i` coefficient).
fn formal_d(c: &FiniteAlgebra, x: &[u32]) -> Vec<u32> {
    let fp = c.fp();
    let (d, n) = (c.dim(), c.generators().len());
    let mut out = vec![0u32; n * d];
    for (t, &coef) in x.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        let alpha = c.monomial_exponents(t).expect("presented");
        for i in 0..n {
            if alpha[i] == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta[i] -= 1;
            let idx = c.monomial_index(&beta).expect("reduced monomial");
            let f = fp.mul(coef, fp.from_i64(alpha[i] as i64));
            out[i * d + idx] = fp.add(out[i * d + idx], f);
        }
    }
    out
}

fn kaehler_presentation(c: Arc<FiniteAlgebra>, a: &Subalgebra) -> Result<Kaehler> {
    let pres = c
        .presentation()
        .ok_or_else(|| Error::Route("the presentation route needs a presented algebra".into()))?
        .clone();
    let free = CModule::free(c.clone(), c.generators().len());
    let mut rels: Vec<Vec<u32>> = pres
        .relations
        .iter()
        .map(|r| formal_d(&c, &crate::algebra::evaluate(&c, r)))
        .collect();
    rels.extend(a.generators().iter().map(|g| formal_d(&c, g)));
    let sub = free.generated(&rels);
    let (module, map) = free.quotient(&sub)?;
    let cols: Vec<Vec<u32>> = (0..c.dim())
        .map(|j| map.project(&formal_d(&c, &c.basis_vector(j))))
        .collect();
    let d = FpMatrix::from_columns(c.fp(), module.dim(), &cols)?;
    Ok(Kaehler {
        module,
        d,
        route: KaehlerRoute::Presentation,
    })
}

/// Linear data of a leg `T / S` of exponent at most one, computed from a
/// generating family `y_1..y_n` of `T` over `S` with `y_i^p in S`.
///
/// With `F = S^{p^n}` and `E : F -> T`, `(alpha, l) -> s_l y^alpha`, the module
/// `Omega_{T/S}` is `T^n / dbar(ker E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedOmega {
    pub n: usize,
    pub top_dim: usize,
    pub base_dim: usize,
    /// `p^n dim S`.
    pub source_dim: usize,
    /// `dim ker E`; zero exactly when the family is a p-basis.
    pub kernel_dim: usize,
    pub omega_dim: usize,
    /// `dim Omega / m Omega`.
    pub cotangent_dim: usize,
}

impl TruncatedOmega {
    pub fn is_pbasis(&self) -> bool {
        self.kernel_dim == 0 && self.source_dim == self.top_dim
    }

    /// `Omega` free of rank `cotangent_dim` over the local ring `T`.
    pub fn is_free(&self) -> bool {
        self.omega_dim == self.cotangent_dim * self.top_dim
    }
}

fn pow_usize(b: usize, e: usize) -> usize {
    b.saturating_pow(e as u32)
}

/// Computes [`TruncatedOmega`] for `top / base` inside the local owner `c`.
pub fn truncated_omega(
    c: &FiniteAlgebra,
    top: &Subalgebra,
    base: &Subalgebra,
    ys: &[Vec<u32>],
) -> Result<TruncatedOmega> {
    c.require_local()?;
    let p = c.p() as usize;
    let fp = c.fp();
    for y in ys {
        if !top.contains(y) {
            return Err(Error::precondition("generator outside the top algebra"));
        }
        if !base.contains(&c.frobenius_power(y, 1)) {
            return Err(Error::precondition("generator whose p-th power is outside the base"));
        }
    }
    let n = ys.len();
    let t_dim = top.dim();
    let s_dim = base.dim();
    let nmon = pow_usize(p, n);
    if nmon.saturating_mul(s_dim) > 4_000_000 {
        return Err(Error::Resource("truncated differential system too large".into()));
    }
    // monomials y^alpha, alpha in [0,p)^n, index sum alpha_i p^i
    let y_ops: Vec<SparseCols> = ys.iter().map(|y| c.mul_operator(y)).collect();
    let mut monos: Vec<Vec<u32>> = Vec::with_capacity(nmon);
    monos.push(c.one());
    for (i, op) in y_ops.iter().enumerate() {
        let stride = pow_usize(p, i);
        for k in 1..p {
            for a in 0..stride {
                let prev = &monos[(k - 1) * stride + a];
                let next = op.apply(prev);
                monos.push(next);
            }
        }
        debug_assert_eq!(monos.len(), stride * p);
    }
    let alpha = |m: usize| -> Vec<usize> { (0..n).map(|i| (m / pow_usize(p, i)) % p).collect() };
    let s_ops: Vec<SparseCols> = base.basis().iter().map(|s| c.mul_operator(s)).collect();
    // columns of E in top coordinates, pair index m * s_dim + l
    let ncols = nmon * s_dim;
    let mut e_cols = Vec::with_capacity(ncols);
    for mono in &monos {
        for s in &s_ops {
            e_cols.push(top.project(&s.apply(mono)));
        }
    }
    let e = FpMatrix::from_columns(fp, t_dim, &e_cols)?;
    let kernel = e.kernel_basis();
    let kernel_dim = kernel.len();

    // dbar(alpha, l) = sum_i alpha_i s_l y^{alpha - e_i} dy_i
    let mut images: Vec<Vec<u32>> = Vec::with_capacity(kernel_dim);
    for kappa in &kernel {
        let mut v = vec![0u32; n * t_dim];
        for (col, &k) in kappa.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let (m, l) = (col / s_dim, col % s_dim);
            let a = alpha(m);
            for i in 0..n {
                if a[i] == 0 {
                    continue;
                }
                let lower = m - pow_usize(p, i);
                let f = fp.mul(k, fp.from_i64(a[i] as i64));
                let w = &e_cols[lower * s_dim + l];
                for (t, &x) in w.iter().enumerate() {
                    if x != 0 {
                        v[i * t_dim + t] = fp.mul_add(v[i * t_dim + t], f, x);
                    }
                }
            }
        }
        images.push(v);
    }
    let image = Subspace::span(fp, n * t_dim, images.iter().cloned());
    let omega_dim = n * t_dim - image.dim();

    // Omega / m Omega = k^n / residues of the image
    let residues: Vec<Vec<u32>> = images
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| c.residue(&top.embed(&v[i * t_dim..(i + 1) * t_dim])).unwrap_or(0))
                .collect()
        })
        .collect();
    let cotangent_dim = n - Subspace::span(fp, n, residues).dim();
    Ok(TruncatedOmega {
        n,
        top_dim: t_dim,
        base_dim: s_dim,
        source_dim: ncols,
        kernel_dim,
        omega_dim,
        cotangent_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{element, presented};

    #[test]
    fn routes_agree_on_dual_numbers() {
        let c = Arc::new(presented(2, &["x"], &[1], &["0"]).unwrap());
        let a = Subalgebra::prime_field(&c);
        let q = kaehler(c.clone(), &a, KaehlerRoute::Quotient).unwrap();
        let pr = kaehler(c.clone(), &a, KaehlerRoute::Presentation).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(pr.dim(), 2);
        assert!(!FiniteAlgebra::is_zero(&q.differential(&c.generators()[0])));
        assert!(FiniteAlgebra::is_zero(&q.differential(&c.one())));
    }

    #[test]
    fn routes_agree_on_non_free_example() {
        // F_2[x, y]/(x^2, y^2) over F_2[xy]
        let c = Arc::new(presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap());
        let xy = element(&c, "x*y").unwrap();
        let a = Subalgebra::generated(&c, &[xy], None);
        let q = kaehler(c.clone(), &a, KaehlerRoute::Quotient).unwrap();
        let pr = kaehler(c.clone(), &a, KaehlerRoute::Presentation).unwrap();
        assert_eq!(q.dim(), pr.dim());
        assert_eq!(q.module.is_free().unwrap(), None);
    }

    #[test]
    fn truncated_matches_on_split_line() {
        let c = presented(3, &["x"], &[2], &["0"]).unwrap();
        let top = Subalgebra::whole(&c);
        let x = c.generators()[0].clone();
        let base = Subalgebra::generated(&c, &[c.frobenius_power(&x, 1)], None);
        let t = truncated_omega(&c, &top, &base, &[x]).unwrap();
        assert_eq!(t.kernel_dim, 0);
        assert!(t.is_pbasis());
        assert!(t.is_free());
        assert_eq!(t.omega_dim, 9);
    }

    #[test]
    fn truncated_detects_non_free() {
        let c = presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap();
        let xy = element(&c, "x*y").unwrap();
        let base = Subalgebra::generated(&c, &[xy], None);
        let top = Subalgebra::whole(&c);
        let t = truncated_omega(&c, &top, &base, c.generators()).unwrap();
        assert!(!t.is_pbasis());
        assert!(!t.is_free());
        let ck = Arc::new(c.clone());
        let q = kaehler(ck, &base, KaehlerRoute::Quotient).unwrap();
        assert_eq!(q.dim(), t.omega_dim);
    }
}
