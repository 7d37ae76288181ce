//! Property suite over a list of documents.

use crate::algebra::{frobenius_chain, Subalgebra};
use crate::classify::Verdict;
use crate::diffcalc::{diff_bracket, diff_dual, extension_setup, OpSpace};
use crate::error::{Error, Result};

use super::commands::{as_whole, classify_leg, diff, jb, resolve_leg, tower, Options, HOM_DIM_LIMIT};
use super::document::{InputDocument, Leg, Loaded};
use super::report::{ClassifyReport, Payload, Report, SelftestCase, SelftestReport};

/// Property groups, in the order they run.
pub const GROUPS: &[&str] = &[
    "expect",
    "classify",
    "gngs",
    "galois",
    "theorem-a",
    "diff",
    "extres",
    "jb",
    "tower",
    "report",
];

/// Largest algebra for the route and ext/res sweeps.
pub const SWEEP_MAX_DIM: usize = 30;

/// Orders swept by the ext/res and principal parts checks.
pub const EXTRES_MAX_ORDER: usize = 2;

struct Run<'a> {
    instance: &'a str,
    filter: Option<&'a str>,
    cases: Vec<SelftestCase>,
    skipped: Vec<String>,
}

impl Run<'_> {
    fn wants(&self, group: &str) -> bool {
        self.filter.is_none_or(|f| f == group)
    }

    fn case(&mut self, property: String, passed: bool, detail: Option<String>) {
        self.cases.push(SelftestCase {
            instance: self.instance.to_string(),
            property,
            passed,
            detail,
        });
    }

    fn fail(&mut self, property: String, e: &Error) {
        self.case(property, false, Some(e.to_string()));
    }

    /// Precondition and locality errors mean the group does not apply.
    fn fail_or_skip(&mut self, property: String, e: &Error) {
        match e {
            Error::Precondition(_) | Error::NotLocal { .. } => {
                self.skipped.push(format!("{} {property}: {e}", self.instance));
            }
            _ => self.fail(property, e),
        }
    }

    fn roundtrip(&mut self, what: &str, r: &Report) {
        if !self.wants("report") {
            return;
        }
        let ok = Report::from_json(&r.to_json()).is_ok_and(|back| back == *r);
        self.case(format!("report {what} round-trip"), ok, None);
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// The value a classification report gives for an expectation key.
pub fn observed(key: &str, r: &ClassifyReport) -> Option<String> {
    Some(match key {
        "exponent" => r.exponent.map_or("infinite".into(), |e| e.to_string()),
        "chain" => join(&r.chain),
        "galois" => r.galois.as_ref()?.verdict.as_str().into(),
        "f_extension" => r.f_extension.verdict.as_str().into(),
        "purely_inseparable" => r.purely_inseparable.verdict.as_str().into(),
        "gngs_n" => join(&r.gngs.as_ref()?.n),
        "gngs_e" => join(&r.gngs.as_ref()?.e),
        "fiber_dim" => r.fiber.as_ref()?.fiber_dim.to_string(),
        "theorem_a" => {
            let t = r.theorem_a.as_ref()?;
            if t.agree {
                t.conditions.first()?.verdict.as_str().into()
            } else {
                "disagree".into()
            }
        }
        _ => return None,
    })
}

fn legs(doc: &InputDocument) -> Vec<Leg> {
    let default = doc.task.leg.clone().unwrap_or_default();
    let mut out = vec![default.clone()];
    for e in &doc.expect {
        let leg = e.leg.clone().unwrap_or_else(|| default.clone());
        if !out.contains(&leg) {
            out.push(leg);
        }
    }
    out
}

/// Runs every property group (or the one named by `filter`) over the documents.
/// Parse errors propagate; load failures are recorded as failed cases.
pub fn selftest(inputs: &[(&str, &str)], filter: Option<&str>, max_dim: usize) -> Result<SelftestReport> {
    if let Some(f) = filter {
        if !GROUPS.contains(&f) {
            return Err(Error::precondition(format!(
                "unknown property group `{f}` (one of {})",
                GROUPS.join(", ")
            )));
        }
    }
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    for (name, text) in inputs {
        let doc = InputDocument::parse(text)?;
        let mut run = Run {
            instance: name,
            filter,
            cases: Vec::new(),
            skipped: Vec::new(),
        };
        match doc.load(max_dim) {
            Ok(loaded) => instance(&mut run, &doc, &loaded, text, max_dim),
            Err(e) => run.fail("load".into(), &e),
        }
        cases.extend(run.cases);
        skipped.extend(run.skipped);
    }
    let passed = cases.iter().filter(|c| c.passed).count();
    Ok(SelftestReport {
        filter: filter.map(str::to_string),
        instances: inputs.len(),
        passed,
        failed: cases.len() - passed,
        cases,
        skipped,
    })
}

fn instance(run: &mut Run, doc: &InputDocument, l: &Loaded, text: &str, max_dim: usize) {
    let default = doc.task.leg.clone().unwrap_or_default();
    let classify_groups = ["expect", "classify", "gngs", "galois", "theorem-a", "report"];
    if classify_groups.iter().any(|g| run.wants(g)) {
        for leg in legs(doc) {
            match resolve_leg(l, &leg).and_then(|(top, base)| Ok((classify_leg(l, &leg, &top, &base)?, top, base))) {
                Ok((r, top, base)) => classify_properties(run, doc, l, &leg, &default, &r, &top, &base, text),
                Err(e) => run.fail(format!("classify {leg}"), &e),
            }
        }
    }
    let opts = Options {
        max_dim,
        ..Options::default()
    };
    let expects = |key: &str| {
        doc.expect
            .iter()
            .find_map(|e| e.values.get(key).map(|(_, v)| v.clone()))
    };
    if run.wants("expect") {
        if let Some(want) = expects("diff_dims") {
            match diff(doc, l, &opts) {
                Ok(r) => {
                    let got = join(&r.bracket_dims);
                    let ok = normalize(&got) == normalize(&want);
                    run.case(
                        "expect diff_dims".into(),
                        ok,
                        (!ok).then(|| format!("expected {want}, got {got}")),
                    );
                }
                Err(e) => run.fail("expect diff_dims".into(), &e),
            }
        }
    }
    if l.algebra.dim() <= SWEEP_MAX_DIM {
        if run.wants("diff") {
            route_sweep(run, l, &default);
        }
        if run.wants("extres") {
            extres_sweep(run, l, &default);
        }
    }
    let jb_expected = expects("jb_collisions").is_some() || expects("jb_violations").is_some();
    if (run.wants("jb") || (run.wants("expect") && jb_expected)) && l.algebra.dim().pow(2) <= HOM_DIM_LIMIT {
        match jb(doc, l, &opts) {
            Ok(out) => {
                let r = &out.report;
                if run.wants("jb") {
                    let ok = !r.hypothesis_holds || r.violations.is_empty();
                    let detail = if r.hypothesis_holds {
                        (!ok).then(|| r.violations.join("; "))
                    } else {
                        Some(format!(
                            "hypothesis fails ({})",
                            r.hypothesis_flag.clone().unwrap_or_default()
                        ))
                    };
                    run.case("jb roundtrips under the hypothesis".into(), ok, detail);
                    let sb = out.special_bases.iter().all(|s| s.verified != Some(false));
                    run.case("jb special bases verify".into(), sb, None);
                }
                if run.wants("expect") {
                    for (key, got) in [
                        ("jb_collisions", r.collisions.len()),
                        ("jb_violations", r.violations.len()),
                    ] {
                        if let Some(want) = expects(key) {
                            let ok = normalize(&want) == got.to_string();
                            run.case(
                                format!("expect {key}"),
                                ok,
                                (!ok).then(|| format!("expected {want}, got {got}")),
                            );
                        }
                    }
                }
                let report = Report::new("jb", text.as_bytes(), Payload::Jb(Box::new(out)));
                run.roundtrip("jb", &report);
            }
            Err(e) => run.fail_or_skip("jb".into(), &e),
        }
    }
    if run.wants("tower") && l.declares("B") {
        match tower(l) {
            Ok(out) => {
                let v = out.tower.violations();
                let detail =
                    (!v.is_empty()).then(|| v.iter().map(|t| t.statement.clone()).collect::<Vec<_>>().join("; "));
                run.case("tower theorems hold".into(), v.is_empty(), detail);
            }
            Err(e) => run.fail("tower".into(), &e),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn classify_properties(
    run: &mut Run,
    doc: &InputDocument,
    l: &Loaded,
    leg: &Leg,
    default: &Leg,
    r: &ClassifyReport,
    top: &Subalgebra,
    base: &Subalgebra,
    text: &str,
) {
    if run.wants("expect") {
        for e in doc.expect.iter().filter(|e| e.leg.as_ref().unwrap_or(default) == leg) {
            for (key, (_, want)) in &e.values {
                if key == "diff_dims" || key.starts_with("jb_") {
                    continue;
                }
                let got = observed(key, r);
                let ok = got.as_deref().is_some_and(|g| normalize(g) == normalize(want));
                let detail = (!ok).then(|| format!("expected {want}, got {}", got.unwrap_or_else(|| "nothing".into())));
                run.case(format!("expect {leg} {key}"), ok, detail);
            }
        }
    }
    if run.wants("classify") {
        let pi = r.purely_inseparable.verdict;
        let ok = !pi.is_true() || r.f_extension.verdict.is_true();
        run.case(format!("classify {leg} p.i. implies F-extension"), ok, None);
        if let Some(f) = &r.fiber {
            run.case(format!("classify {leg} fiber criterion"), f.criterion_holds, None);
        }
        if let Some(e) = r.exponent.filter(|&e| e >= 1) {
            let c = &l.algebra;
            let got = frobenius_chain(c, top, base)
                .and_then(|ch| frobenius_chain(c, &ch.levels[1], base))
                .map(|ch| ch.exponent);
            let ok = matches!(got, Ok(Some(x)) if x + 1 == e);
            run.case(
                format!("classify {leg} exponent of the first Frobenius level"),
                ok,
                None,
            );
        }
    }
    if run.wants("gngs") {
        if let Some(g) = &r.gngs {
            let ok = g.identity_holds && g.defining_inequalities_hold;
            let detail = Some(format!("sum n = {}, sum e = {}", g.sum_n, g.sum_e));
            run.case(format!("gngs {leg} exponent sums"), ok, detail);
        }
        if let (Some(n), true) = (&r.ngs, r.local) {
            let ok = n.isomorphism == (r.purely_inseparable.verdict == Verdict::True);
            run.case(format!("gngs {leg} presentation iff p.i."), ok, n.witness.clone());
        }
    }
    if run.wants("galois") {
        if let Some(b) = &r.galois_battery {
            run.case(
                format!("galois {leg} battery agrees"),
                b.agree,
                Some(b.galois.as_str().into()),
            );
        }
    }
    if run.wants("theorem-a") {
        if let Some(t) = &r.theorem_a {
            let verdicts: Vec<&str> = t.conditions.iter().map(|c| c.verdict.as_str()).collect();
            run.case(
                format!("theorem-a {leg} conditions agree"),
                t.agree,
                Some(verdicts.join(" ")),
            );
        }
    }
    let report = Report::new("classify", text.as_bytes(), Payload::Classify(Box::new(r.clone())));
    run.roundtrip(&format!("classify {leg}"), &report);
}

/// Bracket and dual routes up to the order where `Diff^k` is all of `Hom`.
fn route_sweep(run: &mut Run, l: &Loaded, leg: &Leg) {
    let res = resolve_leg(l, leg).and_then(|(top, base)| {
        let (c, a) = as_whole(&l.algebra, &top, &base)?;
        let space = OpSpace::endomorphisms(c.clone());
        let Some(e) = frobenius_chain(&c, &Subalgebra::whole(&c), &a)?.exponent else {
            return Ok(None);
        };
        let k = space.order_limit(e);
        let bracket = diff_bracket(&space, &a, k);
        let dual = diff_dual(&space, &a, k)?;
        Ok(Some((k, bracket == dual, bracket.dims())))
    });
    match res {
        Ok(Some((k, ok, dims))) => {
            run.case(
                format!("diff {leg} routes agree through order {k}"),
                ok,
                Some(join(&dims)),
            );
        }
        Ok(None) => {}
        Err(e) => run.fail(format!("diff {leg}"), &e),
    }
}

fn extres_sweep(run: &mut Run, l: &Loaded, leg: &Leg) {
    let res = resolve_leg(l, leg).and_then(|(top, base)| {
        let (c, a) = as_whole(&l.algebra, &top, &base)?;
        if !c.is_local() {
            return Ok(None);
        }
        let Some(setup) = extension_setup(c, &a)? else {
            return Ok(None);
        };
        let mut total = 0;
        let mut bad = Vec::new();
        let mut split = Vec::new();
        for k in 0..=EXTRES_MAX_ORDER {
            for d in setup.inner_operators(k) {
                total += 1;
                let case = setup.check(&d, k)?;
                if !case.holds() {
                    bad.push(format!("order {k}: {case:?}"));
                }
            }
            let r = setup.principal_parts_retraction(k)?;
            split.push((k, r.holds(), r.source_dim, r.target_dim));
        }
        Ok(Some((total, bad, split)))
    });
    match res {
        Ok(Some((total, bad, split))) => {
            let detail = if bad.is_empty() {
                Some(format!("{total} operators"))
            } else {
                Some(bad.join("; "))
            };
            run.case(
                format!("extres {leg} res(ext(d)) = d with order <= pk"),
                bad.is_empty(),
                detail,
            );
            for (k, ok, s, t) in split {
                run.case(
                    format!("extres {leg} principal parts split at order {k}"),
                    ok,
                    Some(format!("{s} into {t}")),
                );
            }
        }
        Ok(None) => {}
        Err(e) => run.fail(format!("extres {leg}"), &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_MAX_DIM;

    #[test]
    fn wrong_structure_constant_is_a_failed_case() {
        let text =
            "p = 2\n[algebra]\nbasis = one, x, y\nunit = one\none*one = one\none*x = x\none*y = y\nx*x = y\ny*y = y\n";
        let r = selftest(&[("bad", text)], None, DEFAULT_MAX_DIM).unwrap();
        assert_eq!(r.failed, 1);
        assert!(
            r.cases[0].detail.as_ref().unwrap().contains("associativity failure"),
            "{:?}",
            r.cases[0]
        );
    }

    #[test]
    fn filter_restricts_groups() {
        let text = "p = 2\n[algebra]\nx^2 = 0\n[expect]\npurely_inseparable = true\n";
        let r = selftest(&[("dual", text)], Some("jb"), DEFAULT_MAX_DIM).unwrap();
        assert!(!r.cases.is_empty());
        assert!(r.cases.iter().all(|c| c.property.starts_with("jb")));
        assert!(selftest(&[("dual", text)], Some("nope"), DEFAULT_MAX_DIM).is_err());
    }

    #[test]
    fn expectation_mismatch_fails() {
        let text = "p = 2\n[algebra]\nx^2 = 0\n[expect]\nchain = 2, 2\n";
        let r = selftest(&[("dual", text)], Some("expect"), DEFAULT_MAX_DIM).unwrap();
        assert_eq!(r.failed, 1);
        assert_eq!(r.cases[0].detail.as_deref(), Some("expected 2, 2, got 2, 1"));
    }
}
