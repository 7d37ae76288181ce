//! Bit-packed Gauss-Jordan elimination for p = 2.

/// Reduces a row-major 0/1 buffer in place and returns the pivot columns.
pub(crate) fn rref_in_place(data: &mut [u32], rows: usize, cols: usize) -> Vec<usize> {
    let words = cols.div_ceil(64);
    let mut packed = vec![0u64; rows * words];
    for i in 0..rows {
        for j in 0..cols {
            if data[i * cols + j] & 1 == 1 {
                packed[i * words + j / 64] |= 1u64 << (j % 64);
            }
        }
    }
    let pivots = rref_packed(&mut packed, rows, words, cols);
    for i in 0..rows {
        for j in 0..cols {
            data[i * cols + j] = ((packed[i * words + j / 64] >> (j % 64)) & 1) as u32;
        }
    }
    pivots
}

fn rref_packed(m: &mut [u64], rows: usize, words: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(piv) = (r..rows).find(|&i| m[i * words + w] & bit != 0) else {
            continue;
        };
        if piv != r {
            for k in 0..words {
                m.swap(piv * words + k, r * words + k);
            }
        }
        let pivot_row: Vec<u64> = m[r * words..(r + 1) * words].to_vec();
        for i in (0..rows).filter(|&i| i != r) {
            if m[i * words + w] & bit != 0 {
                for k in w..words {
                    m[i * words + k] ^= pivot_row[k];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::super::field::Fp;
    use super::super::matrix::rref_in_place as generic;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn packed_agrees_with_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f2 = Fp::new(2).unwrap();
        for _ in 0..200 {
            let rows = rng.gen_range(1..20);
            let cols = rng.gen_range(1..140);
            let data: Vec<u32> = (0..rows * cols).map(|_| rng.gen_range(0..2)).collect();
            let mut a = data.clone();
            let mut b = data;
            let pa = rref_in_place(&mut a, rows, cols);
            let pb = generic(f2, &mut b, rows, cols);
            assert_eq!(pa, pb);
            assert_eq!(a, b);
        }
    }
}
