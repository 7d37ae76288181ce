//! One line per acceptance criterion, with the bounds pinned below.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pinsep::algebra::{frobenius_chain, presented, FiniteAlgebra, DEFAULT_MAX_DIM};
use pinsep::classify::{galois_battery, Verdict};
use pinsep::cli::commands::{as_whole, resolve_leg};
use pinsep::cli::corpus::{get, CORPUS};
use pinsep::cli::report::ClassifyReport;
use pinsep::cli::{run, selftest, Command, InputDocument, Leg, Options, Payload, HOM_DIM_LIMIT};
use pinsep::diffcalc::{extension_setup, OpSpace};
use pinsep::jbcorr::{enumerate_subalgebras, kxk_demo, ENUMERATION_MAX_DIM};
use pinsep::towers::CheckStatus;
use pinsep::Error;

const SEED: u64 = 0x5eed_2024;
const SMALL_DIM: usize = 30;
const FAILED_TOWER_LIMIT: Duration = Duration::from_secs(30);
const COMPOSITION_LIMIT: Duration = Duration::from_secs(10);
const SMALL_EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const THEOREM_A_LIMIT: Duration = Duration::from_secs(120);
const THEOREM_A_MIN_INSTANCES: usize = 20;
const THEOREM_A_MIN_EACH: usize = 8;
const EXTRES_MIN_CASES: usize = 50;
const EXTRES_MAX_ORDER: usize = 3;
const BRACKET_MIN_CASES: usize = 100;

struct Classified {
    doc: &'static str,
    dim: usize,
    leg: Leg,
    report: ClassifyReport,
    elapsed: Duration,
}

struct Outcome {
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

type Check = Result<(bool, String), Error>;

fn options(leg: Option<Leg>) -> Options {
    Options {
        leg,
        max_dim: DEFAULT_MAX_DIM,
        ..Options::default()
    }
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

fn classify_corpus() -> Vec<Classified> {
    let mut out = Vec::new();
    for (name, text) in CORPUS {
        let doc = InputDocument::parse(text).unwrap();
        let dim = doc.load(DEFAULT_MAX_DIM).unwrap().algebra.dim();
        for leg in legs(&doc) {
            let t = Instant::now();
            let report = run(Command::Classify, text, &options(Some(leg.clone()))).unwrap();
            let elapsed = t.elapsed();
            let Payload::Classify(r) = report.result else {
                unreachable!()
            };
            out.push(Classified {
                doc: name,
                dim,
                leg,
                report: *r,
                elapsed,
            });
        }
    }
    out
}

fn find<'a>(all: &'a [Classified], doc: &str, leg: &str) -> &'a Classified {
    let leg: Leg = leg.parse().unwrap();
    all.iter().find(|c| c.doc == doc && c.leg == leg).unwrap()
}

fn pi(c: &Classified) -> Verdict {
    c.report.purely_inseparable.verdict
}

fn galois(c: &Classified) -> Option<Verdict> {
    c.report.galois.as_ref().map(|g| g.verdict)
}

fn failed_tower(all: &[Classified]) -> (Check, Duration) {
    let (ac, bc, ab) = (
        find(all, "failed_tower", "A:C"),
        find(all, "failed_tower", "B:C"),
        find(all, "failed_tower", "A:B"),
    );
    let elapsed = ac.elapsed + bc.elapsed + ab.elapsed;
    let witness = ab.report.purely_inseparable.witness.clone().unwrap_or_default();
    let ok = pi(ac) == Verdict::True
        && ac.report.chain == [729, 9, 1]
        && pi(bc) == Verdict::True
        && pi(ab) == Verdict::False
        && witness.contains("dim A[B³] = 4");
    let detail = format!(
        "A⊂C {} chain {:?}, B⊂C {}, A⊂B {} ({witness})",
        pi(ac).as_str(),
        ac.report.chain,
        pi(bc).as_str(),
        pi(ab).as_str()
    );
    (Ok((ok, detail)), elapsed)
}

fn composition(all: &[Classified]) -> (Check, Duration) {
    let (ac, ab, bc) = (
        find(all, "composition_counterexample", "A:C"),
        find(all, "composition_counterexample", "A:B"),
        find(all, "composition_counterexample", "B:C"),
    );
    let t = Instant::now();
    let check = (|| {
        let text = get("composition_counterexample").unwrap();
        let Payload::Tower(out) = run(Command::Tower, text, &options(None))?.result else {
            unreachable!()
        };
        let lemma = out
            .tower
            .theorems
            .iter()
            .find(|th| th.statement.starts_with("A⊂B and B⊂C Galois"))
            .map(|th| th.status);
        let ok = galois(ab) == Some(Verdict::True)
            && galois(bc) == Some(Verdict::True)
            && ac.report.chain.get(1) == Some(&5)
            && ac.report.f_extension.verdict == Verdict::False
            && pi(ac) == Verdict::False
            && lemma == Some(CheckStatus::Verified)
            && out.tower.violations().is_empty();
        let detail = format!(
            "dim A[C³] = {:?}, F {}, p.i. {}, Galois composition {:?}",
            ac.report.chain.get(1),
            ac.report.f_extension.verdict.as_str(),
            pi(ac).as_str(),
            lemma
        );
        Ok((ok, detail))
    })();
    (check, ac.elapsed + ab.elapsed + bc.elapsed + t.elapsed())
}

fn exponent_one(all: &[Classified]) -> (Check, Duration) {
    let (ab, bc) = (
        find(all, "exponent_one_counterexample", "A:B"),
        find(all, "exponent_one_counterexample", "B:C"),
    );
    let pbasis = ab.report.galois.as_ref().and_then(|g| g.pbasis.clone());
    let fiber = bc.report.fiber.as_ref().map(|f| f.fiber_dim);
    let ok = galois(ab) == Some(Verdict::True)
        && pbasis.as_deref() == Some(&["x*y".to_string()][..])
        && fiber == Some(3)
        && galois(bc) == Some(Verdict::False);
    let detail = format!(
        "p-basis {pbasis:?}, fiber over B {fiber:?}, B⊂C Galois {:?}",
        galois(bc)
    );
    (Ok((ok, detail)), ab.elapsed + bc.elapsed)
}

fn kxk() -> Check {
    let r = kxk_demo()?;
    let h = |n: &str| r.endomorphisms.iter().find(|e| e.name == n).unwrap();
    let (h1, h2) = (h("H1"), h("H2"));
    let collide = r.collisions.iter().any(|(a, b)| (a, b) == (&"H1".into(), &"H2".into()));
    let ok = h1.flags.dim == 3
        && h2.flags.dim == 3
        && h1.constants_dim == 1
        && h2.constants_dim == 1
        && h1.constants == h2.constants
        && collide
        && !r.hypothesis_holds
        && r.hypothesis_flag.is_some();
    let detail = format!(
        "dims {}, {}; constants {:?} and {:?}; flag {:?}",
        h1.flags.dim, h2.flags.dim, h1.constants, h2.constants, r.hypothesis_flag
    );
    Ok((ok, detail))
}

fn theorem_a(all: &[Classified]) -> (Check, Duration) {
    let small: Vec<&Classified> = all.iter().filter(|c| c.dim <= SMALL_DIM).collect();
    let elapsed = small.iter().map(|c| c.elapsed).sum();
    let mut counted = 0;
    let (mut yes, mut no) = (0, 0);
    let mut disagree = Vec::new();
    for c in &small {
        let Some(t) = &c.report.theorem_a else { continue };
        counted += 1;
        if !t.agree {
            disagree.push(format!("{} {}", c.doc, c.leg));
        }
        match pi(c) {
            Verdict::True => yes += 1,
            Verdict::False => no += 1,
            Verdict::NotApplicable => {}
        }
    }
    let ok = counted >= THEOREM_A_MIN_INSTANCES
        && yes >= THEOREM_A_MIN_EACH
        && no >= THEOREM_A_MIN_EACH
        && disagree.is_empty();
    let detail = format!("{counted} instances, {yes} p.i., {no} not, disagreements {disagree:?}");
    (Ok((ok, detail)), elapsed)
}

fn selftest_group(group: &str) -> Check {
    let r = selftest(CORPUS, Some(group), DEFAULT_MAX_DIM)?;
    let bad: Vec<String> = r
        .cases
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} {}", c.instance, c.property))
        .collect();
    let ok = !r.cases.is_empty() && bad.is_empty();
    Ok((ok, format!("{} cases, failures {bad:?}", r.cases.len())))
}

fn small_documents() -> Vec<(&'static str, &'static str, InputDocument)> {
    CORPUS
        .iter()
        .map(|(n, t)| (*n, *t, InputDocument::parse(t).unwrap()))
        .filter(|(_, _, d)| d.load(DEFAULT_MAX_DIM).unwrap().algebra.dim() <= SMALL_DIM)
        .collect()
}

fn random_combination(rng: &mut ChaCha8Rng, p: u32, basis: &[Vec<u32>]) -> Vec<u32> {
    let mut v = vec![0u32; basis[0].len()];
    for b in basis {
        let c = rng.gen_range(0..p);
        for (x, &y) in v.iter_mut().zip(b) {
            *x = (*x + c * y) % p;
        }
    }
    v
}

fn ext_res() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut total, mut bad) = (0, Vec::new());
    let mut instances = 0;
    for (name, _, doc) in small_documents() {
        let l = doc.load(DEFAULT_MAX_DIM)?;
        let leg = doc.task.leg.clone().unwrap_or_default();
        let (top, base) = resolve_leg(&l, &leg)?;
        let (c, a) = as_whole(&l.algebra, &top, &base)?;
        if !c.is_local() {
            continue;
        }
        let Some(setup) = extension_setup(c.clone(), &a)? else {
            continue;
        };
        instances += 1;
        for k in 0..=EXTRES_MAX_ORDER {
            let basis = setup.inner_operators(k);
            if basis.is_empty() {
                continue;
            }
            for _ in 0..3 {
                let d = random_combination(&mut rng, c.p(), &basis);
                let case = setup.check(&d, k)?;
                total += 1;
                if !case.holds() {
                    bad.push(format!("{name} order {k}"));
                }
            }
        }
    }
    let ok = total >= EXTRES_MIN_CASES && bad.is_empty();
    Ok((
        ok,
        format!("{total} operators on {instances} instances, violations {bad:?}"),
    ))
}

fn galois_pairs() -> Check {
    let (mut pairs, mut bad) = (0, Vec::new());
    for (name, _, doc) in small_documents() {
        let l = doc.load(DEFAULT_MAX_DIM)?;
        for leg in legs(&doc) {
            let (top, base) = resolve_leg(&l, &leg)?;
            let chain = frobenius_chain(&l.algebra, &top, &base)?;
            for w in chain.levels.windows(2) {
                if w[0].dim() == w[1].dim() {
                    continue;
                }
                let (c, a) = as_whole(&l.algebra, &w[0], &w[1])?;
                pairs += 1;
                match galois_battery(c, &a) {
                    Ok(b) if b.agree => {}
                    Ok(_) => bad.push(format!("{name} {leg} at {}", w[0].dim())),
                    Err(e) => bad.push(format!("{name} {leg} at {}: {e}", w[0].dim())),
                }
            }
        }
    }
    Ok((
        pairs > 0 && bad.is_empty(),
        format!("{pairs} pairs, disagreements {bad:?}"),
    ))
}

fn jb_roundtrips() -> Check {
    let (mut checked, mut skipped, mut bad) = (0, Vec::new(), Vec::new());
    for (name, text) in CORPUS {
        let dim = InputDocument::parse(text)?.load(DEFAULT_MAX_DIM)?.algebra.dim();
        if dim * dim > HOM_DIM_LIMIT {
            skipped.push(format!("{name} (dim {dim})"));
            continue;
        }
        let out = match run(Command::Jb, text, &options(None)) {
            Ok(r) => match r.result {
                Payload::Jb(out) => out,
                _ => unreachable!(),
            },
            Err(Error::Precondition(m)) => {
                skipped.push(format!("{name} ({m})"));
                continue;
            }
            Err(e) => return Err(e),
        };
        checked += 1;
        let r = &out.report;
        if r.hypothesis_holds && !r.violations.is_empty() {
            bad.push(format!("{name}: {}", r.violations.join("; ")));
        }
        if dim <= ENUMERATION_MAX_DIM {
            let l = InputDocument::parse(text)?.load(DEFAULT_MAX_DIM)?;
            let all = enumerate_subalgebras(&l.algebra, &l.subring("A")?)?;
            if r.rings.len() != all.len() {
                bad.push(format!(
                    "{name}: {} candidates, {} subalgebras",
                    r.rings.len(),
                    all.len()
                ));
            }
        }
    }
    Ok((
        checked > 0 && bad.is_empty(),
        format!("{checked} instances, skipped {skipped:?}, violations {bad:?}"),
    ))
}

fn gngs(all: &[Classified]) -> Check {
    let (mut checked, mut bad) = (0, Vec::new());
    for c in all.iter().filter(|c| c.report.local) {
        if let Some(g) = &c.report.gngs {
            checked += 1;
            if !g.identity_holds || g.sum_n != g.sum_e {
                bad.push(format!("{} {} sums", c.doc, c.leg));
            }
        }
        if let Some(n) = &c.report.ngs {
            if n.isomorphism != (pi(c) == Verdict::True) {
                bad.push(format!("{} {} presentation", c.doc, c.leg));
            }
        }
    }
    Ok((
        checked > 0 && bad.is_empty(),
        format!("{checked} legs, violations {bad:?}"),
    ))
}

const SHAPES: &[(&[&str], &[u32], &[&str])] = &[
    (&["x"], &[1], &["0"]),
    (&["x"], &[2], &["0"]),
    (&["x", "y"], &[1, 1], &["0", "0"]),
    (&["x", "y"], &[1, 1], &["0", "x"]),
    (&["x", "y"], &[2, 1], &["0", "0"]),
    (&["x", "y", "z"], &[1, 1, 1], &["0", "0", "x*y"]),
];

fn random_element(rng: &mut ChaCha8Rng, c: &FiniteAlgebra) -> Vec<u32> {
    (0..c.dim()).map(|_| rng.gen_range(0..c.p())).collect()
}

fn brackets() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let (mut total, mut bad) = (0, Vec::new());
    let mut algebras = Vec::new();
    for p in [2u32, 3] {
        for (names, exps, rels) in SHAPES {
            let c = presented(p, names, exps, rels)?;
            if c.dim() <= 27 {
                algebras.push(Arc::new(c));
            }
        }
    }
    while total < 2 * BRACKET_MIN_CASES {
        let c = algebras[rng.gen_range(0..algebras.len())].clone();
        let space = OpSpace::endomorphisms(c.clone());
        let p = c.p() as usize;
        let d: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..c.p())).collect();
        let x = random_element(&mut rng, &c);
        let folded = space.iterated_bracket(&vec![x.clone(); p], &d);
        if folded != space.bracket(&c.pow(&x, p as u64), &d) {
            bad.push(format!("p-fold bracket, dim {}", c.dim()));
        }
        let n = rng.gen_range(1..=4);
        let xs: Vec<Vec<u32>> = (0..n).map(|_| random_element(&mut rng, &c)).collect();
        let at = random_element(&mut rng, &c);
        let closed = space.bracket_development(&xs, &d, &at)?;
        if closed != space.eval(&space.iterated_bracket(&xs, &d), &at) {
            bad.push(format!("development of {n} brackets, dim {}", c.dim()));
        }
        total += 2;
    }
    Ok((
        total >= BRACKET_MIN_CASES && bad.is_empty(),
        format!("{total} cases, violations {bad:?}"),
    ))
}

fn timed(f: impl FnOnce() -> Check) -> (Check, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn outcome((check, elapsed): (Check, Duration), limit: Option<Duration>) -> Outcome {
    let (mut passed, detail) = check.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(l) = limit {
        passed &= elapsed < l;
    }
    Outcome {
        passed,
        detail,
        elapsed,
        limit,
    }
}

#[test]
fn acceptance_criteria() {
    let all = classify_corpus();
    let results = [
        (
            "failed p.i. tower",
            outcome(failed_tower(&all), Some(FAILED_TOWER_LIMIT)),
        ),
        (
            "Galois composition",
            outcome(composition(&all), Some(COMPOSITION_LIMIT)),
        ),
        (
            "exponent-one tower",
            outcome(exponent_one(&all), Some(SMALL_EXAMPLE_LIMIT)),
        ),
        ("K×K correspondence", outcome(timed(kxk), Some(SMALL_EXAMPLE_LIMIT))),
        ("five conditions agree", outcome(theorem_a(&all), Some(THEOREM_A_LIMIT))),
        ("Diff routes agree", outcome(timed(|| selftest_group("diff")), None)),
        ("ext/res contract", outcome(timed(ext_res), None)),
        ("Galois battery agrees", outcome(timed(galois_pairs), None)),
        ("JB roundtrips", outcome(timed(jb_roundtrips), None)),
        ("GNGS sums and presentation", outcome(timed(|| gngs(&all)), None)),
        ("bracket identities", outcome(timed(brackets), None)),
    ];
    for (i, (name, o)) in results.iter().enumerate() {
        let limit = o.limit.map(|l| format!(" < {:.0?}", l)).unwrap_or_default();
        // written to the raw handle so the lines survive test output capture
        writeln!(
            std::io::stderr(),
            "{} criterion {:>2} {name}: {} [{:.2?}{limit}]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            o.elapsed
        )
        .unwrap();
    }
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, (_, o))| !o.passed)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
