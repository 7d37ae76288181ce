use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exactla::Fp;

/// Triangular presentation `x_i^{p^{e_i}} = P_i(x_1, ..., x_{i-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub p: u32,
    pub names: Vec<String>,
    pub exponents: Vec<u32>,
    pub relations: Vec<Poly>,
}

impl Presentation {
    pub fn new(p: u32, names: Vec<String>, exponents: Vec<u32>, relations: Vec<Poly>) -> Result<Self> {
        let pres = Presentation {
            p,
            names,
            exponents,
            relations,
        };
        pres.validate()?;
        Ok(pres)
    }

    /// The split presentation `x_i^{p^{e_i}} = 0`.
    pub fn split(p: u32, names: Vec<String>, exponents: Vec<u32>) -> Result<Self> {
        let n = names.len();
        let relations = vec![Poly::zero(n); n];
        Self::new(p, names, exponents, relations)
    }

    pub fn fp(&self) -> Fp {
        Fp::new(self.p).expect("validated prime")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `p^{e_i}` for each generator.
    pub fn orders(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| (self.p as u64).pow(e)).collect()
    }

    pub fn is_split(&self) -> bool {
        self.relations.iter().all(Poly::is_zero)
    }

    /// Dimension as a checked product; `None` on overflow.
    pub fn dimension(&self) -> Option<u64> {
        self.orders().iter().try_fold(1u64, |acc, &q| acc.checked_mul(q))
    }

    pub fn validate(&self) -> Result<()> {
        let fp = Fp::new(self.p)?;
        let n = self.names.len();
        if self.exponents.len() != n || self.relations.len() != n {
            return Err(Error::structural(
                "one exponent and one relation per generator are required",
            ));
        }
        for (i, name) in self.names.iter().enumerate() {
            if self.names[..i].contains(name) {
                return Err(Error::structural(format!("generator `{name}` declared twice")));
            }
        }
        let orders = self.orders();
        for i in 0..n {
            if self.exponents[i] == 0 {
                return Err(Error::structural(format!(
                    "relation for `{}` needs a positive power of p",
                    self.names[i]
                )));
            }
            let rel = &self.relations[i];
            if rel.nvars != n {
                return Err(Error::structural(
                    "relation polynomial has the wrong number of variables",
                ));
            }
            for t in rel.terms.iter().filter(|t| t.coeff != 0) {
                if t.coeff >= fp.p() {
                    return Err(Error::structural("coefficient outside [0, p)"));
                }
                for (j, &d) in t.exps.iter().enumerate().take(n) {
                    if d == 0 {
                        continue;
                    }
                    if j >= i {
                        return Err(Error::structural(format!(
                            "triangularity violation: relation for `{}` mentions `{}`, which is not an earlier generator",
                            self.names[i], self.names[j]
                        )));
                    }
                    if d as u64 >= orders[j] {
                        return Err(Error::structural(format!(
                            "relation for `{}` has degree {} in `{}`, above the bound {}",
                            self.names[i],
                            d,
                            self.names[j],
                            orders[j] - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn format(&self) -> Vec<String> {
        (0..self.len())
            .map(|i| {
                format!(
                    "{}^{} = {}",
                    self.names[i],
                    self.orders()[i],
                    self.relations[i].format(&self.names)
                )
            })
            .collect()
    }
}
