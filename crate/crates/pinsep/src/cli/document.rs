//! Input documents. Line oriented, `#` starts a comment:
//!
//! ```text
//! p = 3
//! [algebra]
//! generators = x, y
//! x^3 = 0
//! y^3 = x
//! [subring B]
//! x
//! [task]
//! leg = B:C
//! ```
//!
//! Structure-constant algebras use `basis = e1, e2`, `unit = e1 + e2` and
//! product lines `e1*e1 = e1`; missing products are zero.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, FiniteAlgebra, Poly, Presentation, Subalgebra};
use crate::error::{Error, Result};
use crate::exactla::{Fp, FpMatrix};

/// An inclusion `base ⊂ top`, written `base:top`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub base: String,
    pub top: String,
}

impl Leg {
    pub fn new(base: &str, top: &str) -> Self {
        Leg {
            base: base.to_string(),
            top: top.to_string(),
        }
    }

    pub fn label(&self) -> String {
        format!("{}⊂{}", self.base, self.top)
    }
}

impl Default for Leg {
    fn default() -> Self {
        Leg::new("A", "C")
    }
}

impl std::fmt::Display for Leg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.base, self.top)
    }
}

impl FromStr for Leg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (b, t) = s
            .split_once(':')
            .ok_or_else(|| format!("leg `{s}` is not of the form X:Y"))?;
        let (b, t) = (b.trim(), t.trim());
        if !is_ident(b) || !is_ident(t) {
            return Err(format!("leg `{s}` is not of the form X:Y"));
        }
        Ok(Leg::new(b, t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffOp {
    Basis,
    Delta,
    Ext,
    Res,
}

impl FromStr for DiffOp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "basis" => Ok(DiffOp::Basis),
            "delta" => Ok(DiffOp::Delta),
            "ext" => Ok(DiffOp::Ext),
            "res" => Ok(DiffOp::Res),
            _ => Err(format!("unknown operator `{s}` (expected basis, delta, ext or res)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Presented(Presentation),
    Table {
        labels: Vec<String>,
        unit: Poly,
        generators: Vec<(String, Poly)>,
        products: Vec<Vec<Vec<u32>>>,
    },
}

/// An expression with the position of its first character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub line: usize,
    pub column: usize,
    pub text: String,
    pub poly: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubringDecl {
    pub name: String,
    pub line: usize,
    pub elements: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndoBody {
    /// Row-major matrix in basis coordinates.
    Matrix(Vec<Vec<u32>>),
    /// `basis element -> image`; unlisted basis elements map to zero.
    Images(Vec<(Expr, Expr)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoDecl {
    pub name: String,
    pub line: usize,
    pub body: EndoBody,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Task {
    pub leg: Option<Leg>,
    pub order: Option<usize>,
    pub op: Option<DiffOp>,
}

/// Expected values for one leg (`[expect]` is the task leg, `[expect X:Y]`
/// names one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectations {
    pub leg: Option<Leg>,
    pub line: usize,
    pub values: BTreeMap<String, (usize, String)>,
}

/// Keys accepted in `[expect]` sections.
pub const EXPECT_KEYS: &[&str] = &[
    "exponent",
    "chain",
    "galois",
    "f_extension",
    "purely_inseparable",
    "gngs_n",
    "gngs_e",
    "fiber_dim",
    "theorem_a",
    "diff_dims",
    "jb_collisions",
    "jb_violations",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    pub p: u32,
    pub algebra: AlgebraSpec,
    pub subrings: Vec<SubringDecl>,
    pub endomorphisms: Vec<EndoDecl>,
    pub task: Task,
    pub expect: Vec<Expectations>,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A trimmed, comment-free line with the byte offset of its first character.
#[derive(Clone, Copy, Debug)]
struct Line<'a> {
    number: usize,
    offset: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn err(&self, at: usize, message: impl Into<String>) -> Error {
        Error::parse(self.number, self.offset + at + 1, message)
    }

    /// `key = value`, with the byte offset of `value` inside the line text.
    fn key_value(&self) -> Option<(&'a str, &'a str, usize)> {
        let (k, v) = self.text.split_once('=')?;
        let start = self.text.len() - v.len();
        let lead = v.len() - v.trim_start().len();
        Some((k.trim(), v.trim(), start + lead))
    }

    /// Comma-separated pieces with their offsets, empty pieces rejected.
    fn items(&self, text: &'a str, at: usize) -> Result<Vec<(&'a str, usize)>> {
        let mut out = Vec::new();
        let mut pos = at;
        for piece in text.split(',') {
            let lead = piece.len() - piece.trim_start().len();
            let t = piece.trim();
            if t.is_empty() {
                return Err(self.err(pos + lead, "empty list item"));
            }
            out.push((t, pos + lead));
            pos += piece.len() + 1;
        }
        Ok(out)
    }

    fn expr(&self, fp: Fp, text: &str, at: usize, names: &[String]) -> Result<Expr> {
        let poly = parse_poly(fp, text, names, self.number, self.offset + at)?;
        Ok(Expr {
            line: self.number,
            column: self.offset + at + 1,
            text: text.to_string(),
            poly,
        })
    }
}

#[derive(Debug)]
struct Section<'a> {
    header: Line<'a>,
    kind: &'a str,
    name: Option<&'a str>,
    lines: Vec<Line<'a>>,
}

fn split_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let lead = body.len() - body.trim_start().len();
            let t = body.trim();
            (!t.is_empty()).then_some(Line {
                number: i + 1,
                offset: lead,
                text: t,
            })
        })
        .collect()
}

/// Column of the first occurrence of identifier `name` in `text`.
fn find_ident(text: &str, name: &str) -> usize {
    let bytes = text.as_bytes();
    let word = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
    let mut from = 0;
    while let Some(k) = text[from..].find(name) {
        let s = from + k;
        let e = s + name.len();
        if (s == 0 || !word(bytes[s - 1])) && (e == bytes.len() || !word(bytes[e])) {
            return s;
        }
        from = s + 1;
    }
    0
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument> {
        let lines = split_lines(text);
        let mut p: Option<(u32, Line)> = None;
        let mut sections: Vec<Section> = Vec::new();
        for line in lines {
            if line.text.starts_with('[') {
                let Some(inner) = line.text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
                    return Err(line.err(line.text.len(), "expected `]` closing the section header"));
                };
                let mut words = inner.split_whitespace();
                let kind = words.next().unwrap_or("");
                let name = words.next();
                if let Some(extra) = words.next() {
                    return Err(line.err(find_ident(line.text, extra), "unexpected word in section header"));
                }
                match (kind, name) {
                    ("algebra" | "task", None) | ("subring" | "endomorphism", Some(_)) | ("expect", _) => {}
                    ("subring" | "endomorphism", None) => {
                        return Err(line.err(1, format!("section `{kind}` needs a name")));
                    }
                    ("algebra" | "task", Some(n)) => {
                        return Err(line.err(find_ident(line.text, n), format!("section `{kind}` takes no name")));
                    }
                    _ => return Err(line.err(1, format!("unknown section `{kind}`"))),
                }
                if let Some(n) = name {
                    if kind != "expect" && !is_ident(n) {
                        return Err(line.err(line.text.find(n).unwrap_or(1), format!("`{n}` is not a valid name")));
                    }
                    if sections.iter().any(|s| s.kind == kind && s.name == Some(n)) {
                        return Err(line.err(1, format!("section `{kind} {n}` declared twice")));
                    }
                } else if kind != "expect" && sections.iter().any(|s| s.kind == kind) {
                    return Err(line.err(1, format!("section `{kind}` declared twice")));
                }
                sections.push(Section {
                    header: line,
                    kind,
                    name,
                    lines: Vec::new(),
                });
            } else if let Some(sec) = sections.last_mut() {
                sec.lines.push(line);
            } else {
                let Some((k, v, at)) = line.key_value().filter(|(k, _, _)| *k == "p") else {
                    return Err(line.err(0, "expected `p = <prime>` before the first section"));
                };
                if p.is_some() {
                    return Err(line.err(0, "the prime is declared twice"));
                }
                debug_assert_eq!(k, "p");
                let n: u32 = v
                    .parse()
                    .map_err(|_| line.err(at, "the prime must be a decimal integer"))?;
                Fp::new(n).map_err(|_| line.err(at, format!("{n} is not a supported prime")))?;
                p = Some((n, line));
            }
        }
        let (p, _) = p.ok_or_else(|| Error::parse(1, 1, "missing `p = <prime>`"))?;
        let fp = Fp::new(p)?;
        let alg = sections
            .iter()
            .find(|s| s.kind == "algebra")
            .ok_or_else(|| Error::parse(1, 1, "missing [algebra] section"))?;
        let (algebra, vars) = parse_algebra(fp, alg)?;
        let mut doc = InputDocument {
            p,
            algebra,
            subrings: Vec::new(),
            endomorphisms: Vec::new(),
            task: Task::default(),
            expect: Vec::new(),
        };
        for sec in &sections {
            match sec.kind {
                "subring" => doc.subrings.push(parse_subring(fp, sec, &vars)?),
                "endomorphism" => doc.endomorphisms.push(parse_endomorphism(fp, sec, &vars)?),
                "task" => doc.task = parse_task(sec)?,
                "expect" => doc.expect.push(parse_expect(sec)?),
                _ => {}
            }
        }
        Ok(doc)
    }

    /// Variables usable in expressions: generator names or basis labels.
    pub fn variables(&self) -> Vec<String> {
        match &self.algebra {
            AlgebraSpec::Presented(pres) => pres.names.clone(),
            AlgebraSpec::Table { labels, .. } => labels.clone(),
        }
    }

    /// Compiles the algebra and resolves subrings and endomorphisms.
    pub fn load(&self, max_dim: usize) -> Result<Loaded> {
        let fp = Fp::new(self.p)?;
        let algebra = match &self.algebra {
            AlgebraSpec::Presented(pres) => FiniteAlgebra::from_presentation(pres, max_dim)?,
            AlgebraSpec::Table {
                labels,
                unit,
                generators,
                products,
            } => {
                let d = labels.len();
                if d > max_dim {
                    return Err(Error::Resource(format!(
                        "algebra has dimension {d} above the cap {max_dim}"
                    )));
                }
                let linear = |poly: &Poly| -> Vec<u32> {
                    let mut v = vec![0u32; d];
                    for t in &poly.terms {
                        let i = t.exps.iter().position(|&e| e > 0).expect("linear term");
                        v[i] = fp.add(v[i], t.coeff);
                    }
                    v
                };
                let unit_vec = linear(unit);
                let basis_alg = FiniteAlgebra::from_structure_constants(
                    fp,
                    labels.clone(),
                    products.clone(),
                    unit_vec.clone(),
                    Vec::new(),
                    Vec::new(),
                )?;
                let (names, gens): (Vec<String>, Vec<Vec<u32>>) = if generators.is_empty() {
                    (labels.clone(), (0..d).map(|i| basis_alg.basis_vector(i)).collect())
                } else {
                    generators
                        .iter()
                        .map(|(n, poly)| (n.clone(), eval_table(&basis_alg, poly)))
                        .unzip()
                };
                let alg = FiniteAlgebra::from_structure_constants(
                    fp,
                    labels.clone(),
                    products.clone(),
                    unit_vec,
                    gens,
                    names,
                )?;
                if !alg.generators_generate() {
                    return Err(Error::precondition(
                        "the declared generators do not generate the algebra",
                    ));
                }
                alg
            }
        };
        let algebra = Arc::new(algebra);
        let eval = |poly: &Poly| self.evaluate(&algebra, poly);
        let subrings = self
            .subrings
            .iter()
            .map(|s| {
                let seed: Vec<Vec<u32>> = s.elements.iter().map(|e| eval(&e.poly)).collect();
                (s.name.clone(), Subalgebra::generated(&algebra, &seed, None))
            })
            .collect();
        let d = algebra.dim();
        let mut endomorphisms = Vec::new();
        for e in &self.endomorphisms {
            let m = match &e.body {
                EndoBody::Matrix(rows) => {
                    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                        return Err(Error::parse(
                            e.line,
                            1,
                            format!("endomorphism `{}` must be a {d} x {d} matrix", e.name),
                        ));
                    }
                    FpMatrix::from_rows(fp, d, rows)?
                }
                EndoBody::Images(pairs) => {
                    let mut m = FpMatrix::zeros(fp, d, d);
                    for (src, dst) in pairs {
                        let v = eval(&src.poly);
                        let nz: Vec<usize> = (0..d).filter(|&i| v[i] != 0).collect();
                        let [t] = nz[..] else {
                            return Err(Error::parse(src.line, src.column, "left side must be a basis element"));
                        };
                        if v[t] != 1 {
                            return Err(Error::parse(src.line, src.column, "left side must be a basis element"));
                        }
                        let w = eval(&dst.poly);
                        for (i, &x) in w.iter().enumerate() {
                            m.set(i, t, x);
                        }
                    }
                    m
                }
            };
            endomorphisms.push((e.name.clone(), m));
        }
        Ok(Loaded {
            algebra,
            subrings,
            endomorphisms,
        })
    }

    fn evaluate(&self, c: &FiniteAlgebra, poly: &Poly) -> Vec<u32> {
        match &self.algebra {
            AlgebraSpec::Presented(_) => crate::algebra::evaluate(c, poly),
            AlgebraSpec::Table { .. } => eval_table(c, poly),
        }
    }
}

/// Evaluates a polynomial whose variables are the basis vectors.
fn eval_table(c: &FiniteAlgebra, poly: &Poly) -> Vec<u32> {
    let mut acc = c.zero();
    for t in poly.terms.iter().filter(|t| t.coeff != 0) {
        let mut m = c.scale(t.coeff, &c.one());
        for (j, &e) in t.exps.iter().enumerate() {
            if e > 0 {
                m = c.mul(&m, &c.pow(&c.basis_vector(j), e as u64));
            }
        }
        acc = c.add(&acc, &m);
    }
    acc
}

fn parse_names(line: &Line, value: &str, at: usize) -> Result<Vec<String>> {
    let mut names: Vec<String> = Vec::new();
    for (item, pos) in line.items(value, at)? {
        if !is_ident(item) {
            return Err(line.err(pos, format!("`{item}` is not a valid name")));
        }
        if names.iter().any(|n| n == item) {
            return Err(line.err(pos, format!("`{item}` declared twice")));
        }
        names.push(item.to_string());
    }
    Ok(names)
}

fn parse_algebra(fp: Fp, sec: &Section) -> Result<(AlgebraSpec, Vec<String>)> {
    if sec
        .lines
        .iter()
        .any(|l| l.key_value().is_some_and(|(k, _, _)| k == "basis"))
    {
        parse_table(fp, sec)
    } else {
        parse_presentation(fp, sec)
    }
}

struct RelationLine<'a> {
    line: Line<'a>,
    gen: usize,
    exponent: u32,
    rhs: &'a str,
    rhs_at: usize,
}

fn parse_presentation(fp: Fp, sec: &Section) -> Result<(AlgebraSpec, Vec<String>)> {
    let p = fp.p();
    let mut declared: Option<Vec<String>> = None;
    let mut raw: Vec<(Line, &str, &str, usize, u32)> = Vec::new();
    for line in &sec.lines {
        let Some((k, v, at)) = line.key_value() else {
            return Err(line.err(0, "expected `g^N = polynomial`"));
        };
        if k == "generators" {
            if declared.is_some() {
                return Err(line.err(0, "generators declared twice"));
            }
            declared = Some(parse_names(line, v, at)?);
            continue;
        }
        let Some((g, n)) = k.split_once('^') else {
            return Err(line.err(k.len(), "expected `^N` on the left side"));
        };
        let (g, n) = (g.trim(), n.trim());
        if !is_ident(g) {
            return Err(line.err(0, format!("`{g}` is not a valid generator name")));
        }
        let n_at = line.text.find('^').unwrap() + 1;
        let n_at = n_at + (line.text[n_at..].len() - line.text[n_at..].trim_start().len());
        let big: u64 = n
            .parse()
            .map_err(|_| line.err(n_at, "expected a power of p after `^`"))?;
        let mut e = 0u32;
        let mut q = big;
        while q > 1 && q.is_multiple_of(p as u64) {
            q /= p as u64;
            e += 1;
        }
        if q != 1 || e == 0 {
            return Err(line.err(n_at, format!("{big} is not a positive power of p = {p}")));
        }
        raw.push((*line, g, v, at, e));
    }
    let names = match declared {
        Some(names) => names,
        None => {
            let mut names: Vec<String> = Vec::new();
            for (line, g, ..) in &raw {
                if names.iter().any(|n| n == g) {
                    return Err(line.err(0, format!("second relation for `{g}`")));
                }
                names.push(g.to_string());
            }
            names
        }
    };
    let mut rels: Vec<Option<RelationLine>> = (0..names.len()).map(|_| None).collect();
    for (line, g, rhs, rhs_at, e) in raw {
        let gen = names
            .iter()
            .position(|n| n == g)
            .ok_or_else(|| line.err(0, format!("`{g}` is not a declared generator")))?;
        if rels[gen].is_some() {
            return Err(line.err(0, format!("second relation for `{g}`")));
        }
        rels[gen] = Some(RelationLine {
            line,
            gen,
            exponent: e,
            rhs,
            rhs_at,
        });
    }
    let mut exponents = Vec::with_capacity(names.len());
    let mut polys = Vec::with_capacity(names.len());
    for (i, r) in rels.iter().enumerate() {
        let Some(r) = r else {
            return Err(Error::parse(
                sec.header.number,
                1,
                format!("no relation for generator `{}`", names[i]),
            ));
        };
        exponents.push(r.exponent);
        polys.push(parse_poly(fp, r.rhs, &names, r.line.number, r.line.offset + r.rhs_at)?);
    }
    for r in rels.iter().flatten() {
        let i = r.gen;
        for t in &polys[i].terms {
            for (j, &a) in t.exps.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let at = r.rhs_at + find_ident(r.rhs, &names[j]);
                if j >= i {
                    return Err(r.line.err(
                        at,
                        format!(
                            "triangularity violation: relation for `{}` mentions `{}`, which is not an earlier generator",
                            names[i], names[j]
                        ),
                    ));
                }
                let order = (p as u64).pow(exponents[j]);
                if a as u64 >= order {
                    return Err(r.line.err(
                        at,
                        format!(
                            "relation for `{}` has degree {a} in `{}`, above the bound {}",
                            names[i],
                            names[j],
                            order - 1
                        ),
                    ));
                }
            }
        }
    }
    let pres = Presentation::new(p, names.clone(), exponents, polys)?;
    Ok((AlgebraSpec::Presented(pres), names))
}

fn linear_expr(fp: Fp, line: &Line, text: &str, at: usize, labels: &[String]) -> Result<Poly> {
    let e = line.expr(fp, text, at, labels)?;
    if e.poly.terms.iter().any(|t| t.exps.iter().sum::<u32>() != 1) {
        return Err(line.err(at, "expected a linear combination of basis labels"));
    }
    Ok(e.poly)
}

fn parse_table(fp: Fp, sec: &Section) -> Result<(AlgebraSpec, Vec<String>)> {
    let mut labels: Vec<String> = Vec::new();
    for line in &sec.lines {
        if let Some(("basis", v, at)) = line.key_value() {
            if !labels.is_empty() {
                return Err(line.err(0, "basis declared twice"));
            }
            labels = parse_names(line, v, at)?;
        }
    }
    let d = labels.len();
    let mut unit: Option<Poly> = None;
    let mut generators: Vec<(String, Poly)> = Vec::new();
    let mut products = vec![vec![vec![0u32; d]; d]; d];
    let mut given = vec![vec![false; d]; d];
    for line in &sec.lines {
        let Some((k, v, at)) = line.key_value() else {
            return Err(line.err(0, "expected `key = value` or `a*b = combination`"));
        };
        match k {
            "basis" => {}
            "unit" => {
                if unit.is_some() {
                    return Err(line.err(0, "unit declared twice"));
                }
                unit = Some(linear_expr(fp, line, v, at, &labels)?);
            }
            "generators" => {
                for (item, pos) in line.items(v, at)? {
                    generators.push((item.to_string(), line.expr(fp, item, pos, &labels)?.poly));
                }
            }
            _ => {
                let Some((a, b)) = k.split_once('*') else {
                    return Err(line.err(0, format!("unknown key `{k}`")));
                };
                let (a, b) = (a.trim(), b.trim());
                let i = labels
                    .iter()
                    .position(|l| l == a)
                    .ok_or_else(|| line.err(find_ident(line.text, a), format!("unknown basis label `{a}`")))?;
                let j = labels.iter().position(|l| l == b).ok_or_else(|| {
                    let col = line
                        .text
                        .find('*')
                        .map(|s| s + 1 + find_ident(&line.text[s + 1..], b))
                        .unwrap_or(0);
                    line.err(col, format!("unknown basis label `{b}`"))
                })?;
                let poly = linear_expr(fp, line, v, at, &labels)?;
                let mut vec = vec![0u32; d];
                for t in &poly.terms {
                    let s = t.exps.iter().position(|&e| e > 0).unwrap();
                    vec[s] = fp.add(vec[s], t.coeff);
                }
                for (x, y) in [(i, j), (j, i)] {
                    if given[x][y] && products[x][y] != vec {
                        return Err(line.err(0, format!("conflicting products for {a}*{b}")));
                    }
                }
                products[i][j] = vec.clone();
                products[j][i] = vec;
                given[i][j] = true;
                given[j][i] = true;
            }
        }
    }
    let unit =
        unit.ok_or_else(|| Error::parse(sec.header.number, 1, "structure-constant algebra needs `unit = ...`"))?;
    Ok((
        AlgebraSpec::Table {
            labels: labels.clone(),
            unit,
            generators,
            products,
        },
        labels,
    ))
}

fn parse_subring(fp: Fp, sec: &Section, vars: &[String]) -> Result<SubringDecl> {
    let mut elements = Vec::new();
    for line in &sec.lines {
        for (item, pos) in line.items(line.text, 0)? {
            elements.push(line.expr(fp, item, pos, vars)?);
        }
    }
    Ok(SubringDecl {
        name: sec.name.unwrap_or_default().to_string(),
        line: sec.header.number,
        elements,
    })
}

fn parse_endomorphism(fp: Fp, sec: &Section, vars: &[String]) -> Result<EndoDecl> {
    let images = sec.lines.iter().any(|l| l.text.contains("->"));
    let body = if images {
        let mut pairs = Vec::new();
        for line in &sec.lines {
            let Some((l, r)) = line.text.split_once("->") else {
                return Err(line.err(0, "expected `basis element -> image`"));
            };
            let r_at = l.len() + 2 + (r.len() - r.trim_start().len());
            pairs.push((line.expr(fp, l.trim(), 0, vars)?, line.expr(fp, r.trim(), r_at, vars)?));
        }
        EndoBody::Images(pairs)
    } else {
        let mut rows = Vec::new();
        for line in &sec.lines {
            let mut row = Vec::new();
            let mut pos = 0;
            for tok in line.text.split(|c: char| c == ',' || c.is_whitespace()) {
                if !tok.is_empty() {
                    let n: u64 = tok
                        .parse()
                        .map_err(|_| line.err(pos, format!("`{tok}` is not a residue")))?;
                    row.push((n % fp.p() as u64) as u32);
                }
                pos += tok.len() + 1;
            }
            rows.push(row);
        }
        EndoBody::Matrix(rows)
    };
    Ok(EndoDecl {
        name: sec.name.unwrap_or_default().to_string(),
        line: sec.header.number,
        body,
    })
}

fn parse_task(sec: &Section) -> Result<Task> {
    let mut task = Task::default();
    for line in &sec.lines {
        let Some((k, v, at)) = line.key_value() else {
            return Err(line.err(0, "expected `key = value`"));
        };
        match k {
            "leg" => task.leg = Some(v.parse().map_err(|m: String| line.err(at, m))?),
            "order" => {
                task.order = Some(
                    v.parse()
                        .map_err(|_| line.err(at, "order must be a non-negative integer"))?,
                )
            }
            "op" => task.op = Some(v.parse().map_err(|m: String| line.err(at, m))?),
            _ => return Err(line.err(0, format!("unknown task key `{k}`"))),
        }
    }
    Ok(task)
}

fn parse_expect(sec: &Section) -> Result<Expectations> {
    let leg = match sec.name {
        Some(n) => Some(n.parse().map_err(|m: String| sec.header.err(1, m))?),
        None => None,
    };
    let mut values = BTreeMap::new();
    for line in &sec.lines {
        let Some((k, v, _)) = line.key_value() else {
            return Err(line.err(0, "expected `key = value`"));
        };
        if !EXPECT_KEYS.contains(&k) {
            return Err(line.err(0, format!("unknown expectation `{k}`")));
        }
        values.insert(k.to_string(), (line.number, v.to_string()));
    }
    Ok(Expectations {
        leg,
        line: sec.header.number,
        values,
    })
}

/// A compiled document.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub algebra: Arc<FiniteAlgebra>,
    pub subrings: Vec<(String, Subalgebra)>,
    pub endomorphisms: Vec<(String, FpMatrix)>,
}

impl Loaded {
    pub fn declares(&self, name: &str) -> bool {
        self.subrings.iter().any(|(n, _)| n == name)
    }

    /// Declared subring, with `C` the whole algebra and `A`, `k` the prime
    /// field when undeclared.
    pub fn subring(&self, name: &str) -> Result<Subalgebra> {
        if let Some((_, s)) = self.subrings.iter().find(|(n, _)| n == name) {
            return Ok(s.clone());
        }
        match name {
            "C" => Ok(Subalgebra::whole(&self.algebra)),
            "A" | "k" => Ok(Subalgebra::prime_field(&self.algebra)),
            _ => Err(Error::precondition(format!("no subring named `{name}`"))),
        }
    }
}
