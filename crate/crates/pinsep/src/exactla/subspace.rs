use super::field::Fp;
use super::matrix::FpMatrix;

/// A linear subspace of F_p^n stored by its canonical reduced echelon basis.
///
/// Two subspaces are equal exactly when their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    fp: Fp,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(fp: Fp, ambient: usize) -> Self {
        Subspace {
            fp,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(fp: Fp, ambient: usize) -> Self {
        let rows = (0..ambient).map(|i| unit(ambient, i)).collect();
        Subspace {
            fp,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<I, V>(fp: Fp, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut e = Echelon::new(fp, ambient);
        for v in vectors {
            e.insert(v.as_ref().to_vec());
        }
        e.finish()
    }

    #[inline]
    pub fn fp(&self) -> Fp {
        self.fp
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> FpMatrix {
        FpMatrix::from_rows(self.fp, self.ambient, &self.rows).expect("rows have ambient length")
    }

    /// Remainder of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn reduce_in_place(&self, w: &mut [u32]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = w[c];
            if f != 0 {
                let nf = self.fp.neg(f);
                for (x, &r) in w.iter_mut().zip(row) {
                    if r != 0 {
                        *x = self.fp.mul_add(*x, nf, r);
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if self.rows.len() == self.ambient {
            return true;
        }
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Coordinates read off at pivot columns without a membership check.
    pub fn coords_unchecked(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.ambient];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c != 0 {
                for (o, &r) in out.iter_mut().zip(row) {
                    if r != 0 {
                        *o = self.fp.mul_add(*o, c, r);
                    }
                }
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut e = Echelon::from_subspace(self);
        for r in &other.rows {
            e.insert(r.clone());
        }
        e.finish()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.fp, self.ambient);
        }
        // a in self, b in other with a - b = 0
        let cols: Vec<Vec<u32>> = self
            .rows
            .iter()
            .cloned()
            .chain(other.rows.iter().map(|r| r.iter().map(|&x| self.fp.neg(x)).collect()))
            .collect();
        let m = FpMatrix::from_columns(self.fp, self.ambient, &cols).expect("columns have ambient length");
        let vecs = m
            .kernel_basis()
            .into_iter()
            .map(|k| self.combine(&k[..self.dim()]))
            .collect::<Vec<_>>();
        Subspace::span(self.fp, self.ambient, vecs)
    }

    /// Columns that are not pivots; they index a canonical complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Maps every basis vector through `f` and returns the span of the images.
    pub fn map<F>(&self, target_dim: usize, mut f: F) -> Subspace
    where
        F: FnMut(&[u32]) -> Vec<u32>,
    {
        let mut e = Echelon::new(self.fp, target_dim);
        for r in &self.rows {
            e.insert(f(r));
        }
        e.finish()
    }
}

pub fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; n];
    v[i] = 1;
    v
}

/// Incremental row echelon builder; `finish` yields the canonical form.
#[derive(Clone, Debug)]
pub struct Echelon {
    fp: Fp,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivot_row: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Echelon {
    pub fn new(fp: Fp, ambient: usize) -> Self {
        Echelon {
            fp,
            ambient,
            rows: Vec::new(),
            pivot_row: vec![NONE; ambient],
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        let mut e = Echelon::new(s.fp, s.ambient);
        for (r, &c) in s.rows.iter().zip(&s.pivots) {
            e.pivot_row[c] = e.rows.len();
            e.rows.push(r.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Reduces `v` against the current rows; returns the remainder and its
    /// leading column (if nonzero).
    fn reduce(&self, v: &mut [u32]) -> Option<usize> {
        for c in 0..self.ambient {
            let f = v[c];
            if f == 0 {
                continue;
            }
            let ri = self.pivot_row[c];
            if ri == NONE {
                return Some(c);
            }
            let nf = self.fp.neg(f);
            let row = &self.rows[ri];
            for j in c..self.ambient {
                let r = row[j];
                if r != 0 {
                    v[j] = self.fp.mul_add(v[j], nf, r);
                }
            }
        }
        None
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length must match ambient dimension");
        match self.reduce(&mut v) {
            None => false,
            Some(c) => {
                let inv = self.fp.inv(v[c]).expect("leading entry is nonzero");
                for x in v[c..].iter_mut() {
                    *x = self.fp.mul(*x, inv);
                }
                self.pivot_row[c] = self.rows.len();
                self.rows.push(v);
                true
            }
        }
    }

    pub fn finish(self) -> Subspace {
        let fp = self.fp;
        let mut order: Vec<usize> = (0..self.ambient).filter(|&c| self.pivot_row[c] != NONE).collect();
        order.sort_unstable();
        let mut rows: Vec<Vec<u32>> = order.iter().map(|&c| self.rows[self.pivot_row[c]].clone()).collect();
        // back substitution, last pivot first
        for k in (0..rows.len()).rev() {
            let c = order[k];
            let (above, rest) = rows.split_at_mut(k);
            let pr = &rest[0];
            for r in above.iter_mut() {
                let f = r[c];
                if f != 0 {
                    let nf = fp.neg(f);
                    for j in c..pr.len() {
                        if pr[j] != 0 {
                            r[j] = fp.mul_add(r[j], nf, pr[j]);
                        }
                    }
                }
            }
        }
        Subspace {
            fp,
            ambient: self.ambient,
            rows,
            pivots: order,
        }
    }
}

/// Column-sparse matrix used for algebra and module actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseCols {
    fp: Fp,
    rows: usize,
    cols: Vec<Vec<(u32, u32)>>,
}

impl SparseCols {
    pub fn from_dense_columns(fp: Fp, rows: usize, columns: &[Vec<u32>]) -> Self {
        SparseCols {
            fp,
            rows,
            cols: columns.iter().map(|c| to_sparse(c)).collect(),
        }
    }

    pub fn from_sparse_columns(fp: Fp, rows: usize, cols: Vec<Vec<(u32, u32)>>) -> Self {
        SparseCols { fp, rows, cols }
    }

    pub fn from_matrix(m: &FpMatrix) -> Self {
        let cols: Vec<Vec<u32>> = (0..m.cols()).map(|j| m.column(j)).collect();
        Self::from_dense_columns(m.fp(), m.rows(), &cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(u32, u32)] {
        &self.cols[j]
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.fp.p() as u64;
        let mut acc = vec![0u64; self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(i, a) in &self.cols[j] {
                let t = &mut acc[i as usize];
                *t = (*t + x as u64 * a as u64) % p;
            }
        }
        acc.into_iter().map(|x| x as u32).collect()
    }

    /// Applies the operator to a sparse vector, returning a sparse vector
    /// sorted by index.
    pub fn apply_sparse(&self, v: &[(u32, u32)]) -> Vec<(u32, u32)> {
        let mut terms: Vec<(u32, u32)> = Vec::new();
        for &(j, x) in v {
            for &(i, a) in &self.cols[j as usize] {
                terms.push((i, self.fp.mul(x, a)));
            }
        }
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(terms.len());
        for (i, a) in terms {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = self.fp.add(last.1, a),
                _ => out.push((i, a)),
            }
        }
        out.retain(|t| t.1 != 0);
        out
    }

    pub fn to_dense(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.fp, self.rows, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                m.set(i as usize, j, a);
            }
        }
        m
    }
}

pub fn to_sparse(v: &[u32]) -> Vec<(u32, u32)> {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i as u32, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn span_matches_rref() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u32, 3, 5] {
            let fp = Fp::new(p).unwrap();
            for _ in 0..100 {
                let n = rng.gen_range(1..12);
                let k = rng.gen_range(0..10);
                let vs: Vec<Vec<u32>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
                let s = Subspace::span(fp, n, &vs);
                if k > 0 {
                    let r = FpMatrix::from_rows(fp, n, &vs).unwrap().rref();
                    assert_eq!(s.pivots(), &r.pivots[..]);
                    for i in 0..r.rank {
                        assert_eq!(&s.basis()[i][..], r.r.row(i));
                    }
                } else {
                    assert_eq!(s.dim(), 0);
                }
            }
        }
    }

    #[test]
    fn intersection_dimension_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fp = Fp::new(3).unwrap();
        for _ in 0..100 {
            let n = rng.gen_range(1..9);
            let mk = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(0..n + 1);
                let vs: Vec<Vec<u32>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
                Subspace::span(fp, n, vs)
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let s = a.sum(&b);
            let i = a.intersect(&b);
            assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            assert!(a.contains_subspace(&i) && b.contains_subspace(&i));
        }
    }
}
