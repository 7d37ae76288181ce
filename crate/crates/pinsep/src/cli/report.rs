//! Reports: one JSON object per invocation; the text form is rendered from it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{
    FReport, FiberReport, GaloisBattery, GaloisReport, GngsSummary, NgsReport, PiReport, TheoremAReport, Verdict,
};
use crate::diffcalc::ExtResCase;
use crate::jbcorr::{JbReport, SpecialBasisSummary};
use crate::towers::TowerReport;

use super::document::{DiffOp, Leg};

pub const TOOL: &str = "pinsep";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: String,
    pub result: Payload,
    /// Wall time in microseconds, only with `--timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

impl Report {
    pub fn new(command: &str, input: &[u8], result: Payload) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            input_digest: digest(input),
            result,
            timing_us: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Classify(Box<ClassifyReport>),
    Tower(Box<TowerOutput>),
    Jb(Box<JbOutput>),
    Diff(Box<DiffReport>),
    Selftest(SelftestReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub p: u32,
    pub algebra_dim: usize,
    pub leg: Leg,
    pub top_dim: usize,
    pub base_dim: usize,
    pub local: bool,
    pub exponent: Option<usize>,
    pub chain: Vec<usize>,
    pub galois: Option<GaloisReport>,
    pub f_extension: FReport,
    pub purely_inseparable: PiReport,
    pub fiber: Option<FiberReport>,
    pub gngs: Option<GngsSummary>,
    pub ngs: Option<NgsReport>,
    pub galois_battery: Option<GaloisBattery>,
    pub theorem_a: Option<TheoremAReport>,
    /// Parts that were skipped, with the reason.
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerOutput {
    pub p: u32,
    pub dims: (usize, usize, usize),
    pub tower: TowerReport,
    /// `C / m_B C` over `B / m_B`.
    pub fiber_over_b: Option<usize>,
    /// The closing question of the tower section: how often `A ⊂ B[C^{p^e}]`
    /// is an F-extension, as `(e, verdict)`.
    pub measured: Vec<(usize, Verdict)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialBasisEntry {
    pub name: String,
    pub basis: Option<SpecialBasisSummary>,
    pub verified: Option<bool>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JbOutput {
    pub p: u32,
    pub base: String,
    pub algebra_dim: usize,
    /// `declared`, `chain` and `enumeration` counts.
    pub candidate_sources: Vec<(String, usize)>,
    pub report: JbReport,
    pub special_bases: Vec<SpecialBasisEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDump {
    pub name: String,
    pub order: Option<usize>,
    /// `basis element -> image`, zero images omitted.
    pub images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    pub p: u32,
    pub leg: Leg,
    pub order: usize,
    pub hom_dim: usize,
    pub bracket_dims: Vec<usize>,
    pub dual_dims: Vec<usize>,
    pub routes_agree: bool,
    pub order_limit: Option<usize>,
    pub op: Option<DiffOp>,
    pub operators: Vec<OperatorDump>,
    pub ext_res: Vec<ExtResCase>,
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestCase {
    pub instance: String,
    pub property: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub filter: Option<String>,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<SelftestCase>,
    /// Groups that did not apply to an instance, with the reason.
    pub skipped: Vec<String>,
}

fn v(x: Verdict) -> &'static str {
    x.as_str()
}

fn opt_list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Human rendering derived from the report.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {} ({})", r.tool, r.version, r.command, r.input_digest);
    match &r.result {
        Payload::Classify(c) => render_classify(&mut s, c),
        Payload::Tower(t) => render_tower(&mut s, t),
        Payload::Jb(j) => render_jb(&mut s, j),
        Payload::Diff(d) => render_diff(&mut s, d),
        Payload::Selftest(t) => render_selftest(&mut s, t),
    }
    if let Some(us) = r.timing_us {
        let _ = writeln!(s, "time: {:.3} s", us as f64 / 1e6);
    }
    s
}

fn render_classify(s: &mut String, c: &ClassifyReport) {
    let _ = writeln!(
        s,
        "leg {}: p = {}, dim {} over dim {}{}",
        c.leg.label(),
        c.p,
        c.top_dim,
        c.base_dim,
        if c.local { "" } else { " (not local)" }
    );
    let exp = c.exponent.map(|e| e.to_string()).unwrap_or_else(|| "infinite".into());
    let _ = writeln!(s, "exponent: {exp}");
    let _ = writeln!(s, "chain dims: [{}]", opt_list(&c.chain));
    if let Some(g) = &c.galois {
        let _ = write!(s, "galois: {}", v(g.verdict));
        if let Some(b) = &g.pbasis {
            let _ = write!(s, " (p-basis {})", b.join(", "));
        }
        if let Some(w) = &g.witness {
            let _ = write!(s, " ({w})");
        }
        s.push('\n');
    }
    let _ = write!(s, "F-extension: {}", v(c.f_extension.verdict));
    if let Some(w) = &c.f_extension.witness {
        let _ = write!(s, " ({w})");
    }
    s.push('\n');
    let _ = write!(s, "purely inseparable: {}", v(c.purely_inseparable.verdict));
    if let Some(w) = &c.purely_inseparable.witness {
        let _ = write!(s, " ({w})");
    }
    s.push('\n');
    if let Some(f) = &c.fiber {
        let _ = writeln!(
            s,
            "fiber: dim {}, p.i. {}, criterion {}",
            f.fiber_dim,
            v(f.fiber_purely_inseparable),
            if f.criterion_holds { "holds" } else { "FAILS" }
        );
    }
    if let Some(g) = &c.gngs {
        let _ = writeln!(
            s,
            "gngs: [{}], n = [{}], e = [{}], sum n = {}, sum e = {}",
            g.elements.join(", "),
            opt_list(&g.n),
            opt_list(&g.e),
            g.sum_n,
            g.sum_e
        );
    }
    if let Some(n) = &c.ngs {
        let _ = write!(s, "ngs isomorphism: {}", n.isomorphism);
        if let Some(p) = &n.presentation {
            let _ = write!(s, " [{}]", p.join("; "));
        }
        if let Some(w) = &n.witness {
            let _ = write!(s, " ({w})");
        }
        s.push('\n');
    }
    if let Some(b) = &c.galois_battery {
        let _ = writeln!(
            s,
            "galois battery: galois {}, p-basis {}, omega projective {}, End = C[Der] {}, Der summand {}; agree {}",
            v(b.galois),
            v(b.pbasis),
            v(b.omega_projective),
            v(b.end_generated_by_der),
            v(b.der_summand),
            b.agree
        );
    }
    if let Some(t) = &c.theorem_a {
        let _ = writeln!(s, "theorem A (agree {}):", t.agree);
        for cond in &t.conditions {
            let _ = write!(s, "  ({}) {}: {}", cond.id, cond.statement, v(cond.verdict));
            if let Some(d) = &cond.detail {
                let _ = write!(s, " ({d})");
            }
            s.push('\n');
        }
    }
    for k in &c.skipped {
        let _ = writeln!(s, "skipped: {k}");
    }
}

fn render_tower(s: &mut String, t: &TowerOutput) {
    let (a, b, c) = t.dims;
    let _ = writeln!(s, "tower: p = {}, dims A = {a}, B = {b}, C = {c}", t.p);
    if t.tower.single_leg {
        let _ = writeln!(s, "B = A: single leg");
    }
    for l in &t.tower.legs {
        let _ = writeln!(s, "  {}", l.describe());
    }
    let _ = writeln!(s, "C projective over B: {}", t.tower.c_free_over_b);
    if let Some(f) = t.fiber_over_b {
        let _ = writeln!(s, "fiber of B⊂C: dim {f}");
    }
    for x in &t.tower.auxiliary {
        let _ = writeln!(
            s,
            "  A⊂B[C^(p^{})]: dim {}, F-extension {}, p.i. {}",
            x.e,
            x.dim,
            v(x.f_extension),
            v(x.purely_inseparable)
        );
    }
    for th in &t.tower.theorems {
        let status = serde_json::to_value(th.status)
            .ok()
            .and_then(|x| x.as_str().map(str::to_string))
            .unwrap_or_default();
        let _ = write!(s, "[{status}] {}", th.statement);
        if let Some(r) = &th.reason {
            let _ = write!(s, " ({r})");
        }
        s.push('\n');
    }
    let measured: Vec<String> = t.measured.iter().map(|(e, x)| format!("e={e}: {}", v(*x))).collect();
    if !measured.is_empty() {
        let _ = writeln!(s, "A⊂B[C^(p^e)] F-extension: {}", measured.join(", "));
    }
}

fn render_jb(s: &mut String, j: &JbOutput) {
    let r = &j.report;
    let _ = writeln!(
        s,
        "jb over {}: p = {}, dim C = {}, dim End = {}",
        j.base, j.p, j.algebra_dim, r.end_dim
    );
    let src: Vec<String> = j.candidate_sources.iter().map(|(n, k)| format!("{n} {k}")).collect();
    let _ = writeln!(s, "candidates: {}", src.join(", "));
    let _ = write!(s, "hypothesis ({}): {}", r.surrogate, r.hypothesis_holds);
    if let Some(f) = &r.hypothesis_flag {
        let _ = write!(s, " [flag: {f}]");
    }
    s.push('\n');
    for ring in &r.rings {
        match ring.roundtrip {
            Some(ok) => {
                let _ = writeln!(
                    s,
                    "  ring {} (dim {}): End dim {}, roundtrip {}",
                    ring.name,
                    ring.dim,
                    ring.end_dim.unwrap_or(0),
                    ok
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "  ring {} (dim {}): excluded, {}",
                    ring.name,
                    ring.dim,
                    ring.reason.as_deref().unwrap_or("")
                );
            }
        }
    }
    for h in &r.endomorphisms {
        let _ = write!(
            s,
            "  endomorphisms {} (dim {}): constants dim {} [{}]",
            h.name,
            h.flags.dim,
            h.constants_dim,
            h.constants.join(", ")
        );
        match h.roundtrip {
            Some(ok) => {
                let _ = writeln!(s, ", roundtrip {ok}");
            }
            None => {
                let _ = writeln!(s, ", excluded, {}", h.reason.as_deref().unwrap_or(""));
            }
        }
    }
    for (a, b) in &r.collisions {
        let _ = writeln!(s, "collision: {a} ≠ {b} with equal constants");
    }
    for e in &j.special_bases {
        match &e.basis {
            Some(b) => {
                let _ = writeln!(
                    s,
                    "  special basis of {}: l = {}, t = [{}]",
                    e.name,
                    b.l,
                    b.ts.join(", ")
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "  special basis of {}: {}",
                    e.name,
                    e.reason.as_deref().unwrap_or("")
                );
            }
        }
    }
    let _ = writeln!(s, "violations: {}", r.violations.len());
    for x in &r.violations {
        let _ = writeln!(s, "  {x}");
    }
}

fn render_diff(s: &mut String, d: &DiffReport) {
    let _ = writeln!(
        s,
        "diff over {}: p = {}, k = {}, dim Hom = {}",
        d.leg.label(),
        d.p,
        d.order,
        d.hom_dim
    );
    let _ = writeln!(s, "bracket route: [{}]", opt_list(&d.bracket_dims));
    let _ = writeln!(s, "dual route: [{}]", opt_list(&d.dual_dims));
    let _ = writeln!(s, "routes agree: {}", d.routes_agree);
    if let Some(l) = d.order_limit {
        let _ = writeln!(s, "order limit r p^e - 1 = {l}");
    }
    for op in &d.operators {
        let ord = op.order.map(|o| o.to_string()).unwrap_or_else(|| "?".into());
        let _ = writeln!(s, "  {} (order {ord}): {}", op.name, op.images.join(", "));
    }
    for (i, c) in d.ext_res.iter().enumerate() {
        let _ = writeln!(
            s,
            "  ext/res #{i}: k = {}, res(ext) = id {}, order {} <= {}",
            c.order,
            c.restricts,
            c.ext_order.map(|o| o.to_string()).unwrap_or_else(|| "?".into()),
            c.bound
        );
    }
    for k in &d.skipped {
        let _ = writeln!(s, "skipped: {k}");
    }
}

fn render_selftest(s: &mut String, t: &SelftestReport) {
    for c in &t.cases {
        let _ = write!(
            s,
            "{} {} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.instance,
            c.property
        );
        if let Some(d) = &c.detail {
            let _ = write!(s, ": {d}");
        }
        s.push('\n');
    }
    for k in &t.skipped {
        let _ = writeln!(s, "SKIP {k}");
    }
    let _ = writeln!(
        s,
        "{} instances, {} passed, {} failed{}",
        t.instances,
        t.passed,
        t.failed,
        t.filter.as_ref().map(|f| format!(" (filter {f})")).unwrap_or_default()
    );
}
