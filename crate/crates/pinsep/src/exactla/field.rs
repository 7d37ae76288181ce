use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic context for the prime field F_p. Residues are `u32` in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::structural(format!("modulus {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::structural(format!("{p} is not prime")));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + f * b`, the elimination primitive.
    #[inline]
    pub fn mul_add(self, a: u32, f: u32, b: u32) -> u32 {
        ((a as u64 + f as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.p;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Binomial coefficient mod p through Lucas' theorem.
    pub fn binomial(self, mut n: u64, mut k: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u32;
        while n > 0 || k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, self.small_binomial(nd as u32, kd as u32));
            n /= p;
            k /= p;
        }
        acc
    }

    fn small_binomial(self, n: u32, k: u32) -> u32 {
        let k = k.min(n - k);
        let mut num = 1u32;
        let mut den = 1u32;
        for j in 0..k {
            num = self.mul(num, n - j);
            den = self.mul(den, j + 1);
        }
        self.mul(num, self.inv(den).expect("digits below p have invertible factorials"))
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue tagged with its modulus, for inputs whose moduli must be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpScalar {
    pub value: u32,
    pub p: u32,
}

impl FpScalar {
    pub fn new(value: u32, p: u32) -> Result<Self> {
        let fp = Fp::new(p)?;
        Ok(FpScalar {
            value: value % fp.p(),
            p,
        })
    }
}

/// Pascal's triangle mod p, kept as an independent check on `Fp::binomial`.
pub fn pascal_rows(fp: Fp, n: usize) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![1 % fp.p(); i + 1];
        for j in 1..i {
            row[j] = fp.add(rows[i - 1][j - 1], rows[i - 1][j]);
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_recognised() {
        assert!(Fp::new(2).is_ok());
        assert!(Fp::new(3).is_ok());
        assert!(Fp::new(4).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(0).is_err());
    }

    #[test]
    fn inverses() {
        let f = Fp::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [2u32, 3, 5, 7] {
            let f = Fp::new(p).unwrap();
            let rows = pascal_rows(f, 60);
            for (n, row) in rows.iter().enumerate() {
                for (k, &v) in row.iter().enumerate() {
                    assert_eq!(f.binomial(n as u64, k as u64), v, "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn worked_binomials() {
        let f3 = Fp::new(3).unwrap();
        assert_eq!(f3.binomial(4, 2), 0);
        assert_eq!(f3.binomial(6, 3), 2);
        assert_eq!(f3.binomial(3, 1), 0);
    }
}
