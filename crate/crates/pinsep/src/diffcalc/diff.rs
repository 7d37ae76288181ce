use crate::algebra::Subalgebra;
use crate::error::{Error, Result};
use crate::exactla::{unit, Echelon, FpMatrix, Subspace};
use crate::modules::CModule;

use super::ops::OpSpace;
use super::tensor::{PrincipalParts, TensorSquare};

/// `Diff^0 ⊆ Diff^1 ⊆ ...` computed by one of the two routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffFiltration {
    pub levels: Vec<Subspace>,
}

impl DiffFiltration {
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }
}

/// Generators of a module: minimal ones over a local ring, otherwise a greedy
/// choice of standard basis vectors.
fn module_generators(m: &CModule) -> Result<Vec<Vec<u32>>> {
    if m.ring().is_local() {
        return m.minimal_generators();
    }
    let mut ech = Echelon::new(m.fp(), m.dim());
    let mut out = Vec::new();
    for j in 0..m.dim() {
        if ech.dim() == m.dim() {
            break;
        }
        let e = unit(m.dim(), j);
        if ech.contains(&e) {
            continue;
        }
        out.push(e);
        ech = Echelon::from_subspace(&m.generated(&out));
    }
    Ok(out)
}

/// `Hom_C(P^k, M)` pulled back along `delta_k`, as a subspace of `Hom_k(C, M)`.
fn hom_from_principal_parts(space: &OpSpace, pp: &PrincipalParts) -> Result<Subspace> {
    let fp = space.fp();
    let c = space.algebra();
    let (d, m) = (c.dim(), space.target_dim());
    let pm = &pp.module;
    let gens = module_generators(pm)?;
    let s = gens.len();
    // E : C^s -> P^k in word coordinates, column i * d + t is w_t pi_i
    let mut e_cols: Vec<Vec<u32>> = Vec::with_capacity(s * d);
    for g in &gens {
        e_cols.extend(pm.orbit(g));
    }
    let e = FpMatrix::from_columns(fp, pm.dim(), &e_cols)?;
    let gammas = e.solve_columns(&pp.delta)?;
    let kernel = e.kernel_basis();
    // orb[l][t] = w_t e_l in M
    let orb: Vec<Vec<Vec<u32>>> = (0..m).map(|l| space.module().orbit(&unit(m, l))).collect();
    let combine = |coeffs: &[u32], l: usize| -> Vec<u32> {
        let mut out = vec![0u32; m];
        for (t, &a) in coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &y) in out.iter_mut().zip(&orb[l][t]) {
                if y != 0 {
                    *o = fp.mul_add(*o, a, y);
                }
            }
        }
        out
    };
    // unknowns (i, l) -> i * m + l
    let nunk = s * m;
    let solutions: Vec<Vec<u32>> = if kernel.is_empty() {
        (0..nunk).map(|k| unit(nunk, k)).collect()
    } else {
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(nunk);
        for i in 0..s {
            for l in 0..m {
                let mut col = Vec::with_capacity(kernel.len() * m);
                for kappa in &kernel {
                    col.extend(combine(&kappa[i * d..(i + 1) * d], l));
                }
                cols.push(col);
            }
        }
        FpMatrix::from_columns(fp, kernel.len() * m, &cols)?.kernel_basis()
    };
    // Phi : M^s -> Hom_k(C, M), column (i, l) gathers D(b_j) for m_i = e_l
    let mut phi_cols: Vec<Vec<u32>> = Vec::with_capacity(nunk);
    for i in 0..s {
        for l in 0..m {
            let mut col = Vec::with_capacity(d * m);
            for gamma in &gammas {
                let gamma = gamma
                    .as_ref()
                    .ok_or_else(|| Error::structural("delta outside the span of the generators"))?;
                col.extend(combine(&gamma[i * d..(i + 1) * d], l));
            }
            phi_cols.push(col);
        }
    }
    let phi = FpMatrix::from_columns(fp, d * m, &phi_cols)?;
    Ok(Subspace::span(
        fp,
        d * m,
        solutions.iter().map(|u| phi.mul_vec(u).expect("shape")),
    ))
}

/// `Diff^j_A(C, M)` for `j = 0..=kmax` as `Hom_C(P^j, M)`. Levels where the
/// powers of `J` have stabilized repeat the previous answer.
pub fn diff_dual(space: &OpSpace, a: &Subalgebra, kmax: usize) -> Result<DiffFiltration> {
    let square = TensorSquare::general(space.algebra().clone(), a);
    let powers = square.ideal_powers(kmax + 1);
    let mut levels: Vec<Subspace> = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        if k >= 1 && powers[k + 1] == powers[k] {
            let last = levels.last().unwrap().clone();
            levels.push(last);
            continue;
        }
        let pp = PrincipalParts::from_power(&square, k, &powers[k + 1])?;
        levels.push(hom_from_principal_parts(space, &pp)?);
    }
    Ok(DiffFiltration { levels })
}

/// The bracket route wrapped as a filtration.
pub fn diff_bracket(space: &OpSpace, a: &Subalgebra, kmax: usize) -> DiffFiltration {
    DiffFiltration {
        levels: space.diff_bracket(a, kmax),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{element, presented, FiniteAlgebra};
    use crate::exactla::Fp;

    fn check_routes(c: Arc<FiniteAlgebra>, a: &Subalgebra, kmax: usize) -> Vec<usize> {
        let space = OpSpace::endomorphisms(c);
        let dual = diff_dual(&space, a, kmax).unwrap();
        let br = diff_bracket(&space, a, kmax);
        assert_eq!(dual, br);
        dual.dims()
    }

    #[test]
    fn routes_agree_on_truncated_line() {
        let c = Arc::new(presented(3, &["x"], &[1], &["0"]).unwrap());
        let a = Subalgebra::prime_field(&c);
        assert_eq!(check_routes(c, &a, 3), vec![3, 6, 9, 9]);
    }

    #[test]
    fn routes_agree_over_non_free_base() {
        let c = Arc::new(presented(2, &["x", "y"], &[1, 1], &["0", "0"]).unwrap());
        let xy = element(&c, "x*y").unwrap();
        let a = Subalgebra::generated(&c, &[xy], None);
        let dims = check_routes(c, &a, 3);
        assert_eq!(dims[0], 4);
    }

    #[test]
    fn routes_agree_with_relation() {
        let c = Arc::new(presented(2, &["x", "y"], &[1, 1], &["0", "x"]).unwrap());
        let a = Subalgebra::prime_field(&c);
        check_routes(c, &a, 3);
    }

    #[test]
    fn routes_agree_on_product_of_fields() {
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
        let k = Arc::new(k);
        let a = Subalgebra::prime_field(&k);
        assert_eq!(check_routes(k, &a, 2), vec![2, 2, 2]);
    }
}
