use super::field::{Fp, FpScalar};
use super::gf2;
use crate::error::{Error, Result};

/// Products of residues that fit in a `u64` accumulator before reducing.
fn lazy_budget(p: u64) -> usize {
    let sq = (p - 1) * (p - 1);
    ((u64::MAX - p) / sq).min(usize::MAX as u64) as usize - 1
}

/// Dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    fp: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub r: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(fp: Fp, rows: usize, cols: usize) -> Self {
        FpMatrix {
            fp,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(fp: Fp, n: usize) -> Self {
        let mut m = Self::zeros(fp, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of residues (reduced mod p).
    pub fn from_rows(fp: Fp, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::structural(format!(
                    "row {i} has length {} but {cols} columns were declared",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| x % fp.p()));
        }
        Ok(FpMatrix {
            fp,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(fp: Fp, rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::zeros(fp, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::structural(format!(
                    "column {j} has length {} but {rows} rows were declared",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % fp.p();
            }
        }
        Ok(m)
    }

    /// Builds a matrix from tagged scalars, rejecting mixed moduli.
    pub fn from_scalars(rows: &[Vec<FpScalar>]) -> Result<Self> {
        let first = rows
            .iter()
            .flat_map(|r| r.iter())
            .next()
            .ok_or_else(|| Error::structural("matrix has no entries to fix the modulus"))?;
        let fp = Fp::new(first.p)?;
        let cols = rows[0].len();
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let mut row = Vec::with_capacity(r.len());
            for s in r {
                if s.p != first.p {
                    return Err(Error::structural(format!(
                        "mismatched moduli {} and {} in one matrix",
                        first.p, s.p
                    )));
                }
                row.push(s.value);
            }
            out.push(row);
        }
        Self::from_rows(fp, cols, &out)
    }

    #[inline]
    pub fn fp(&self) -> Fp {
        self.fp
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.fp.p();
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.fp, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.fp != other.fp {
            return Err(Error::structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.fp.p() as u64;
        let budget = lazy_budget(p);
        let mut out = FpMatrix::zeros(self.fp, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut pending = 0;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                if pending == budget {
                    acc.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
                pending += 1;
                for (x, &b) in acc.iter_mut().zip(other.row(k)) {
                    *x += a * b as u64;
                }
            }
            for (o, &x) in out.data[i * other.cols..(i + 1) * other.cols].iter_mut().zip(&acc) {
                *o = (x % p) as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::structural(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let p = self.fp.p() as u64;
        let budget = lazy_budget(p);
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                let mut pending = 0;
                for (&a, &b) in self.row(i).iter().zip(v) {
                    if a != 0 && b != 0 {
                        if pending == budget {
                            acc %= p;
                            pending = 0;
                        }
                        pending += 1;
                        acc += a as u64 * b as u64;
                    }
                }
                (acc % p) as u32
            })
            .collect())
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.zip_with(other, |a, b| self.fp.add(a, b))
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.zip_with(other, |a, b| self.fp.sub(a, b))
    }

    fn zip_with(&self, other: &FpMatrix, f: impl Fn(u32, u32) -> u32) -> Result<FpMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.fp != other.fp {
            return Err(Error::structural("shape mismatch in elementwise operation"));
        }
        Ok(FpMatrix {
            fp: self.fp,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        FpMatrix {
            fp: self.fp,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| self.fp.mul(a, c)).collect(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.cols {
            return Err(Error::structural("column mismatch in vertical stack"));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix {
            fp: self.fp,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn rref(&self) -> Rref {
        let mut r = self.clone();
        let pivots = if self.fp.p() == 2 {
            gf2::rref_in_place(&mut r.data, r.rows, r.cols)
        } else {
            rref_in_place(self.fp, &mut r.data, r.rows, r.cols)
        };
        Rref {
            rank: pivots.len(),
            r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space basis, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { r, pivots, .. } = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Some solution of `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::structural(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = FpMatrix::zeros(self.fp, self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            aug.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            aug.row_mut(i)[self.cols] = bi % self.fp.p();
        }
        let Rref { r, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Solves `self x = b` for every column `b` of `rhs` with one elimination.
    /// Free variables are set to zero; inconsistent columns give `None`.
    pub fn solve_columns(&self, rhs: &FpMatrix) -> Result<Vec<Option<Vec<u32>>>> {
        if rhs.rows != self.rows {
            return Err(Error::structural(format!(
                "right-hand side with {} rows for {} rows",
                rhs.rows, self.rows
            )));
        }
        let n = self.cols;
        let w = n + rhs.cols;
        let mut aug = FpMatrix::zeros(self.fp, self.rows, w);
        for i in 0..self.rows {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.row_mut(i)[n..].copy_from_slice(rhs.row(i));
        }
        let Rref { r, pivots, .. } = aug.rref();
        let lhs_rank = pivots.iter().take_while(|&&c| c < n).count();
        let mut out = Vec::with_capacity(rhs.cols);
        for j in 0..rhs.cols {
            let inconsistent = (lhs_rank..r.rows).any(|i| r.get(i, n + j) != 0);
            if inconsistent {
                out.push(None);
                continue;
            }
            let mut x = vec![0u32; n];
            for (i, &c) in pivots[..lhs_rank].iter().enumerate() {
                x[c] = r.get(i, n + j);
            }
            out.push(Some(x));
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.fp, n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let Rref { r, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.fp, n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&r.row(i)[n..]);
        }
        Some(inv)
    }
}

pub(crate) fn kernel_from_rref(r: &FpMatrix, pivots: &[usize]) -> Vec<Vec<u32>> {
    let fp = r.fp();
    let n = r.cols();
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; n];
        v[f] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = fp.neg(r.get(i, f));
        }
        out.push(v);
    }
    out
}

/// Gauss-Jordan elimination on a row-major buffer; returns pivot columns.
pub(crate) fn rref_in_place(fp: Fp, data: &mut [u32], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut support: Vec<usize> = Vec::with_capacity(cols);
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = fp.inv(data[r * cols + c]).expect("pivot is nonzero");
        support.clear();
        for j in c..cols {
            let x = data[r * cols + j];
            if x != 0 {
                data[r * cols + j] = fp.mul(x, inv);
                support.push(j);
            }
        }
        let (before, rest) = data.split_at_mut(r * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        let eliminate = |row: &mut [u32]| {
            let f = row[c];
            if f != 0 {
                let nf = fp.neg(f);
                for &j in &support {
                    row[j] = fp.mul_add(row[j], nf, pivot_row[j]);
                }
            }
        };
        for row in before.chunks_mut(cols) {
            eliminate(row);
        }
        for row in after.chunks_mut(cols) {
            eliminate(row);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn identity_rref() {
        let m = FpMatrix::identity(f(5), 2);
        let r = m.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn zero_rref() {
        let m = FpMatrix::zeros(f(3), 3, 4);
        let r = m.rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn singular_over_three() {
        let m = FpMatrix::from_rows(f(3), 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let i2 = FpMatrix::identity(f(3), 2);
        assert_eq!(i2.solve(&[1, 2]).unwrap(), Some(vec![1, 2]));
        let a = FpMatrix::from_rows(f(2), 2, &[vec![1, 1]]).unwrap();
        assert_eq!(a.solve(&[1]).unwrap(), Some(vec![1, 0]));
        let z = FpMatrix::zeros(f(2), 2, 2);
        assert_eq!(z.solve(&[1, 0]).unwrap(), None);
        assert!(i2.solve(&[1]).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert!(FpMatrix::identity(f(2), 3).kernel_basis().is_empty());
        let z = FpMatrix::zeros(f(3), 2, 3);
        assert_eq!(z.kernel_basis(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let a = FpMatrix::from_rows(f(3), 2, &[vec![1, 2]]).unwrap();
        assert_eq!(a.kernel_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn mixed_moduli_rejected() {
        let rows = vec![vec![FpScalar::new(1, 3).unwrap(), FpScalar::new(1, 5).unwrap()]];
        assert!(FpMatrix::from_scalars(&rows).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = FpMatrix::from_rows(f(7), 3, &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FpMatrix::identity(f(7), 3));
    }
}
