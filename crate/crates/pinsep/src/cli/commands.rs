use std::sync::Arc;

use crate::algebra::{frobenius_chain, FiniteAlgebra, Subalgebra, DEFAULT_MAX_DIM};
use crate::classify::{
    fiber_algebra, fiber_check, galois_battery, gngs, is_f_extension, is_galois, is_purely_inseparable,
    ngs_presentation, theorem_a, LegLabel, PiReport, Verdict, THEOREM_A_MAX_DIM,
};
use crate::diffcalc::{delta_alpha, diff_bracket, diff_dual, extension_setup, restrict, DiffOperator, OpSpace};
use crate::error::{Error, Result};
use crate::exactla::FpMatrix;
use crate::jbcorr::{
    close_subalgebra, end_over, enumerate_subalgebras, not_projective, special_basis, verify_correspondence,
    EndAlgebra, EndSubalgebra, ENUMERATION_MAX_DIM,
};
use crate::towers::{tower_report, TowerSpec};

use super::document::{DiffOp, InputDocument, Leg, Loaded};
use super::report::{
    ClassifyReport, DiffReport, JbOutput, OperatorDump, Payload, Report, SpecialBasisEntry, TowerOutput,
};

/// Largest `dim Hom_k(C, C)` handled by `diff` and `jb` without `--force`.
pub const HOM_DIM_LIMIT: usize = 10_000;

#[derive(Clone, Debug)]
pub struct Options {
    pub leg: Option<Leg>,
    pub order: Option<usize>,
    pub op: Option<DiffOp>,
    pub force: bool,
    pub max_dim: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            leg: None,
            order: None,
            op: None,
            force: false,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    Tower,
    Jb,
    Diff,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Tower => "tower",
            Command::Jb => "jb",
            Command::Diff => "diff",
        }
    }
}

/// Parses, loads and runs one command on a document.
pub fn run(cmd: Command, text: &str, opts: &Options) -> Result<Report> {
    let doc = InputDocument::parse(text)?;
    let loaded = doc.load(opts.max_dim)?;
    let payload = match cmd {
        Command::Classify => Payload::Classify(Box::new(classify(&doc, &loaded, opts)?)),
        Command::Tower => Payload::Tower(Box::new(tower(&loaded)?)),
        Command::Jb => Payload::Jb(Box::new(jb(&doc, &loaded, opts)?)),
        Command::Diff => Payload::Diff(Box::new(diff(&doc, &loaded, opts)?)),
    };
    Ok(Report::new(cmd.name(), text.as_bytes(), payload))
}

fn leg_of(doc: &InputDocument, opts: &Options) -> Leg {
    opts.leg.clone().or_else(|| doc.task.leg.clone()).unwrap_or_default()
}

pub fn resolve_leg(l: &Loaded, leg: &Leg) -> Result<(Subalgebra, Subalgebra)> {
    let top = l.subring(&leg.top)?;
    let base = l.subring(&leg.base)?;
    if !top.contains_subalgebra(&base) {
        return Err(Error::precondition(format!(
            "{} is not contained in {}",
            leg.base, leg.top
        )));
    }
    Ok((top, base))
}

/// The leg with its top as a standalone algebra.
pub fn as_whole(
    c: &Arc<FiniteAlgebra>,
    top: &Subalgebra,
    base: &Subalgebra,
) -> Result<(Arc<FiniteAlgebra>, Subalgebra)> {
    if top.dim() == c.dim() {
        Ok((c.clone(), base.clone()))
    } else {
        Ok((Arc::new(top.to_algebra(c)), top.restrict(base)?))
    }
}

fn skip<T>(skipped: &mut Vec<String>, what: &str, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(e @ (Error::NotLocal { .. } | Error::Precondition(_) | Error::Resource(_))) => {
            skipped.push(format!("{what}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn classify(doc: &InputDocument, l: &Loaded, opts: &Options) -> Result<ClassifyReport> {
    let leg = leg_of(doc, opts);
    let (top, base) = resolve_leg(l, &leg)?;
    classify_leg(l, &leg, &top, &base)
}

pub fn classify_leg(l: &Loaded, leg: &Leg, top: &Subalgebra, base: &Subalgebra) -> Result<ClassifyReport> {
    let c = &l.algebra;
    let label = LegLabel::new(&leg.top, &leg.base);
    let chain = frobenius_chain(c, top, base)?;
    let exponent = chain.exponent;
    let mut skipped = Vec::new();
    let galois = match exponent {
        Some(0 | 1) => skip(&mut skipped, "galois", is_galois(c, top, base))?.map(|g| g.report),
        _ => None,
    };
    let f_extension = is_f_extension(c, top, base, &label)?;
    let purely_inseparable = match is_purely_inseparable(c, top, base, &label) {
        Ok(r) => r,
        Err(e @ Error::NotLocal { .. }) => {
            skipped.push(format!("purely inseparable: {e}"));
            PiReport {
                verdict: Verdict::NotApplicable,
                chain: f_extension.chain.clone(),
                legs: Vec::new(),
                failing_level: None,
                witness: Some("algebra is not local".into()),
            }
        }
        Err(e) => return Err(e),
    };
    let fiber = if exponent.is_some() {
        skip(&mut skipped, "fiber", fiber_check(c, top, base))?
    } else {
        None
    };
    let (gngs_summary, ngs) = if exponent.is_some() {
        match skip(&mut skipped, "gngs", gngs(c, top, base))? {
            Some(g) => (
                Some(g.summary(c)),
                skip(&mut skipped, "ngs", ngs_presentation(c, top, base, &g))?,
            ),
            None => (None, None),
        }
    } else {
        (None, None)
    };
    let (galois_battery, theorem_a_report) = if top.dim() <= THEOREM_A_MAX_DIM {
        let (w, a) = as_whole(c, top, base)?;
        let battery = match exponent {
            Some(0 | 1) => skip(&mut skipped, "galois battery", galois_battery(w.clone(), &a))?,
            _ => None,
        };
        (battery, Some(theorem_a(w, &a, THEOREM_A_MAX_DIM)?))
    } else {
        skipped.push(format!(
            "galois battery and theorem A: dim {} above {THEOREM_A_MAX_DIM}",
            top.dim()
        ));
        (None, None)
    };
    Ok(ClassifyReport {
        p: c.p(),
        algebra_dim: c.dim(),
        leg: leg.clone(),
        top_dim: top.dim(),
        base_dim: base.dim(),
        local: c.is_local(),
        exponent,
        chain: chain.dims(),
        galois,
        f_extension,
        purely_inseparable,
        fiber,
        gngs: gngs_summary,
        ngs,
        galois_battery,
        theorem_a: theorem_a_report,
        skipped,
    })
}

pub fn tower(l: &Loaded) -> Result<TowerOutput> {
    if !l.declares("B") {
        return Err(Error::precondition("tower needs a [subring B] section"));
    }
    let c = &l.algebra;
    let a = l.subring("A")?;
    let b = l.subring("B")?;
    let top = l.subring("C")?;
    let spec = TowerSpec::new(c, top.clone(), a.clone(), b.clone())?;
    let tower = tower_report(&spec)?;
    let fiber_over_b = if c.is_local() {
        Some(fiber_algebra(c, &top, &b)?.dim())
    } else {
        None
    };
    let measured = tower.auxiliary.iter().map(|x| (x.e, x.f_extension)).collect();
    Ok(TowerOutput {
        p: c.p(),
        dims: (a.dim(), b.dim(), top.dim()),
        tower,
        fiber_over_b,
        measured,
    })
}

fn check_hom_size(d: usize, force: bool) -> Result<()> {
    let hom = d.saturating_mul(d);
    if hom > HOM_DIM_LIMIT && !force {
        return Err(Error::Resource(format!(
            "dim Hom_k(C, C) = {hom} exceeds {HOM_DIM_LIMIT}; rerun with --force"
        )));
    }
    Ok(())
}

pub fn jb(doc: &InputDocument, l: &Loaded, opts: &Options) -> Result<JbOutput> {
    let c = &l.algebra;
    let base_name = opts
        .leg
        .as_ref()
        .or(doc.task.leg.as_ref())
        .map(|g| g.base.clone())
        .unwrap_or_else(|| "A".into());
    let a = l.subring(&base_name)?;
    check_hom_size(c.dim(), opts.force)?;
    let end = EndAlgebra::new(c.clone(), &a)?;
    let mut rings: Vec<(String, Subalgebra)> = Vec::new();
    let push = |rings: &mut Vec<(String, Subalgebra)>, name: String, s: Subalgebra| -> bool {
        if rings.iter().any(|(_, t)| *t == s) {
            return false;
        }
        rings.push((name, s));
        true
    };
    let mut declared = 0;
    for (name, s) in &l.subrings {
        if s.contains_subalgebra(&a) && push(&mut rings, name.clone(), s.clone()) {
            declared += 1;
        }
    }
    let whole = Subalgebra::whole(c);
    let chain = frobenius_chain(c, &whole, &a)?;
    let mut from_chain = 0;
    for (e, s) in chain.levels.iter().enumerate() {
        if push(&mut rings, format!("C^[{e}]"), s.clone()) {
            from_chain += 1;
        }
    }
    let mut enumerated = 0;
    if c.dim() <= ENUMERATION_MAX_DIM {
        for (i, s) in enumerate_subalgebras(c, &a)?.into_iter().enumerate() {
            if push(&mut rings, format!("S{i}"), s) {
                enumerated += 1;
            }
        }
    }
    let mut endos: Vec<(String, EndSubalgebra)> = Vec::new();
    for (name, m) in &l.endomorphisms {
        let h = close_subalgebra(&end, &[end.space().flatten(m)])?;
        endos.push((name.clone(), h));
    }
    for (name, s) in &rings {
        if not_projective(c, &whole, s)?.is_none() {
            let h = end_over(&end, s)?;
            if !endos.iter().any(|(_, g)| g.space == h.space) {
                endos.push((format!("End_{name}"), h));
            }
        }
    }
    let report = verify_correspondence(&end, &rings, &endos)?;
    let special_bases = endos
        .iter()
        .filter(|(_, h)| h.is_admissible())
        .map(|(name, h)| match special_basis(&end, h) {
            Ok(sb) => Ok(SpecialBasisEntry {
                name: name.clone(),
                verified: Some(sb.verify(&end, h)),
                basis: Some(sb.summary(&end)),
                reason: None,
            }),
            Err(e @ (Error::NotLocal { .. } | Error::Precondition(_))) => Ok(SpecialBasisEntry {
                name: name.clone(),
                basis: None,
                verified: None,
                reason: Some(e.to_string()),
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JbOutput {
        p: c.p(),
        base: base_name,
        algebra_dim: c.dim(),
        candidate_sources: vec![
            ("declared".into(), declared),
            ("chain".into(), from_chain),
            ("enumeration".into(), enumerated),
        ],
        report,
        special_bases,
    })
}

fn images(c: &FiniteAlgebra, sources: &[(String, Vec<u32>)], m: &FpMatrix) -> Vec<String> {
    sources
        .iter()
        .enumerate()
        .filter_map(|(j, (label, _))| {
            let col = m.column(j);
            (!FiniteAlgebra::is_zero(&col)).then(|| format!("{label} -> {}", c.format_element(&col)))
        })
        .collect()
}

fn dump(
    c: &FiniteAlgebra,
    name: String,
    sources: &[(String, Vec<u32>)],
    op: &DiffOperator,
    order: Option<usize>,
) -> OperatorDump {
    OperatorDump {
        name,
        order,
        images: images(c, sources, &op.matrix),
    }
}

/// Multi-indices `alpha` with `alpha_i < bounds_i` and `|alpha| <= k`, graded.
fn multi_indices(bounds: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..b).filter_map(move |x| {
                    let mut n = a.clone();
                    n.push(x);
                    (n.iter().sum::<usize>() <= k).then_some(n)
                })
            })
            .collect();
    }
    out.sort_by_key(|a| (a.iter().sum::<usize>(), a.clone()));
    out
}

pub fn diff(doc: &InputDocument, l: &Loaded, opts: &Options) -> Result<DiffReport> {
    let leg = leg_of(doc, opts);
    let (top, base) = resolve_leg(l, &leg)?;
    let (c, a) = as_whole(&l.algebra, &top, &base)?;
    let k = opts.order.or(doc.task.order).unwrap_or(1);
    check_hom_size(c.dim(), opts.force)?;
    let space = OpSpace::endomorphisms(c.clone());
    let exponent = frobenius_chain(&c, &Subalgebra::whole(&c), &a)?.exponent;
    let order_limit = exponent.map(|e| space.order_limit(e));
    if let Some(lim) = order_limit {
        if k > lim.max(1) * 4 && !opts.force {
            return Err(Error::Resource(format!(
                "order {k} is far above the order limit {lim}; rerun with --force"
            )));
        }
    }
    let bracket = diff_bracket(&space, &a, k);
    let dual = diff_dual(&space, &a, k)?;
    let mut skipped = Vec::new();
    let op = opts.op.or(doc.task.op);
    let sources: Vec<(String, Vec<u32>)> = (0..c.dim())
        .map(|j| (c.labels()[j].clone(), c.basis_vector(j)))
        .collect();
    let limit = order_limit.unwrap_or(k.max(1) * 4);
    let mut operators = Vec::new();
    let mut ext_res = Vec::new();
    match op {
        None => {}
        Some(DiffOp::Basis) => {
            for (i, v) in bracket.levels[k].basis().iter().enumerate() {
                let d = space.operator(v, Some(k));
                operators.push(dump(&c, format!("D{}", i + 1), &sources, &d, space.order_of(v, limit)));
            }
        }
        Some(DiffOp::Delta) => {
            let split = c.presentation().map(|p| (p.is_split(), p.orders()));
            match split {
                Some((true, orders)) if a.dim() == 1 => {
                    let bounds: Vec<usize> = orders.iter().map(|&q| q as usize).collect();
                    for alpha in multi_indices(&bounds, k) {
                        let d = delta_alpha(&c, &alpha)?;
                        let name = format!(
                            "Δ({})",
                            alpha.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                        );
                        let ord = space.order_of(&space.flatten(&d.matrix), limit);
                        operators.push(dump(&c, name, &sources, &d, ord));
                    }
                }
                _ => skipped.push("delta: needs a split presentation over the prime field".into()),
            }
        }
        Some(DiffOp::Ext) => match extension_setup(c.clone(), &a)? {
            Some(setup) => {
                for (i, v) in setup.inner_operators(k).iter().enumerate() {
                    let ext = setup.extend(v, k)?;
                    let case = setup.check(v, k)?;
                    operators.push(dump(&c, format!("ext(D{})", i + 1), &sources, &ext, case.ext_order));
                    ext_res.push(case);
                }
            }
            None => skipped.push("ext: C has no p-basis over A[C^p]".into()),
        },
        Some(DiffOp::Res) => match extension_setup(c.clone(), &a)? {
            Some(setup) => {
                let b = &setup.frobenius;
                let bsrc: Vec<(String, Vec<u32>)> =
                    b.basis().iter().map(|v| (c.format_element(v), v.clone())).collect();
                for (i, v) in bracket.levels[k].basis().iter().enumerate() {
                    let r = restrict(&c, b, &space.operator(v, Some(k)));
                    let ord = setup.space.order_of(&setup.space.flatten(&r.matrix), limit);
                    operators.push(dump(&c, format!("res(D{})", i + 1), &bsrc, &r, ord));
                }
            }
            None => skipped.push("res: C has no p-basis over A[C^p]".into()),
        },
    }
    Ok(DiffReport {
        p: c.p(),
        leg,
        order: k,
        hom_dim: c.dim() * c.dim(),
        bracket_dims: bracket.dims(),
        dual_dims: dual.dims(),
        routes_agree: bracket == dual,
        order_limit,
        op,
        operators,
        ext_res,
        skipped,
    })
}
