use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::Fp;

/// A polynomial over F_p in named variables, one exponent slot per variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    pub nvars: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: u32,
    pub exps: Vec<u32>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0)
    }

    /// Highest exponent of variable `j` over all nonzero terms.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms
            .iter()
            .filter(|t| t.coeff != 0)
            .map(|t| t.exps[j])
            .max()
            .unwrap_or(0)
    }

    /// Merges equal monomials and drops zero terms.
    pub fn normalize(mut self, fp: Fp) -> Self {
        self.terms.sort_by(|a, b| a.exps.cmp(&b.exps));
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            match out.last_mut() {
                Some(last) if last.exps == t.exps => last.coeff = fp.add(last.coeff, t.coeff % fp.p()),
                _ => out.push(Term {
                    coeff: t.coeff % fp.p(),
                    exps: t.exps,
                }),
            }
        }
        out.retain(|t| t.coeff != 0);
        Poly {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn format(&self, names: &[String]) -> String {
        let terms: Vec<String> = self
            .terms
            .iter()
            .filter(|t| t.coeff != 0)
            .map(|t| format_monomial(t.coeff, &t.exps, names))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

pub fn format_monomial(coeff: u32, exps: &[u32], names: &[String]) -> String {
    let factors: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    match (coeff, factors.is_empty()) {
        (c, true) => c.to_string(),
        (1, false) => factors.join("*"),
        (c, false) => format!("{c}*{}", factors.join("*")),
    }
}

/// Parses `c*g1^a1*...` terms joined by `+` (a leading or infix `-` negates
/// the following term). `line` and `col0` locate the text for error messages.
pub fn parse_poly(fp: Fp, text: &str, names: &[String], line: usize, col0: usize) -> Result<Poly> {
    let mut p = Parser {
        s: text.as_bytes(),
        i: 0,
        line,
        col0,
    };
    let poly = p.poly(fp, names)?;
    p.skip_ws();
    if p.i < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly.normalize(fp))
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    line: usize,
    col0: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.line, self.col0 + self.i + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::parse(self.line, self.col0 + start + 1, "number out of range"))
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        if start == self.i || self.s[start].is_ascii_digit() {
            return Err(self.err("expected a generator name"));
        }
        Ok((std::str::from_utf8(&self.s[start..self.i]).unwrap().to_string(), start))
    }

    fn poly(&mut self, fp: Fp, names: &[String]) -> Result<Poly> {
        let mut terms = Vec::new();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.i += 1;
            negate = true;
        }
        loop {
            let mut t = self.term(fp, names)?;
            if negate {
                t.coeff = fp.neg(t.coeff);
            }
            terms.push(t);
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.i += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(Poly {
            nvars: names.len(),
            terms,
        })
    }

    fn term(&mut self, fp: Fp, names: &[String]) -> Result<Term> {
        let mut coeff = 1u32;
        let mut exps = vec![0u32; names.len()];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.number()?;
                    coeff = fp.mul(coeff, (n % fp.p() as u64) as u32);
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let (name, at) = self.ident()?;
                    let j = names.iter().position(|n| *n == name).ok_or_else(|| {
                        Error::parse(self.line, self.col0 + at + 1, format!("unknown generator `{name}`"))
                    })?;
                    let mut e = 1u64;
                    if self.peek() == Some(b'^') {
                        self.i += 1;
                        e = self.number()?;
                    }
                    let e = u32::try_from(e).map_err(|_| self.err("exponent out of range"))?;
                    exps[j] = exps[j]
                        .checked_add(e)
                        .ok_or_else(|| self.err("exponent out of range"))?;
                }
                _ => return Err(self.err("expected a coefficient or generator")),
            }
            if self.peek() == Some(b'*') {
                self.i += 1;
            } else {
                break;
            }
        }
        Ok(Term { coeff, exps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_terms() {
        let fp = Fp::new(3).unwrap();
        let n = names(&["x", "y"]);
        let p = parse_poly(fp, "2*x^2*y + x + 1", &n, 1, 0).unwrap();
        assert_eq!(p.terms.len(), 3);
        assert_eq!(p.format(&n), "1 + x + 2*x^2*y");
        let q = parse_poly(fp, "x + 2*x", &n, 1, 0).unwrap();
        assert!(q.is_zero());
        let r = parse_poly(fp, "-x", &n, 1, 0).unwrap();
        assert_eq!(r.terms[0].coeff, 2);
    }

    #[test]
    fn reports_positions() {
        let fp = Fp::new(2).unwrap();
        let n = names(&["x"]);
        match parse_poly(fp, "x + z", &n, 4, 10) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(column, 15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly(fp, "x +", &n, 1, 0).is_err());
        assert!(parse_poly(fp, "x y", &n, 1, 0).is_err());
    }
}
