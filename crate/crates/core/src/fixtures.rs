//! Reference fixtures and the report that checks them.
//!
//! Every check compares an expected value with what the library computes.
//! Checks under `reported` record known disagreements and scan results; they
//! are printed but do not count toward the pass/fail total.

use std::collections::HashMap;

use serde::Serialize;

use crate::bracket::{bracket, link_normalized, mirror_symmetric, normalized};
use crate::checkerboard::{dual, graph_of, is_isomorphic};
use crate::chirality::{analyze, integer_pretzels, scan_family, single_diagram_criterion, Analysis, ClassifyConfig, ScanInstance};
use crate::conway::{generate_family, parse, render, FamilyParams};
use crate::diagram::{build, canonical_code, Diagram, DiagramCode};
use crate::flype::orbit_with;

pub const DH_KNOT: &str = "(2 1,3) 1 1 (2 1,3)";

/// The four minimal diagrams of the DH knot, in reference order.
pub const DH_DIAGRAMS: [&str; 4] = [
    "((((2,1),3),1),1) ((2,1),3)",
    "((((1,2),3),1),1) ((2,1),3)",
    "((1,(3,(2,1))),1) ((2,1),3)",
    "(1,(1,((2,1),3))) ((2,1),3)",
];

pub const MUTANT_SELF_DUAL: &str = ".(2,3).(3,2)";
pub const MUTANT_CHIRAL: &str = ".(2,3).(2,3)";

pub const CHIRAL_LINK: &str = "6*(2 1,2) 1.(2,2 1) 1";
pub const CHIRAL_LINK_SECOND: &str = "6*(1,(2,(1,2))).(((2,1),2),1)";

pub const DH_FAMILY: [&str; 4] =
    ["(2 1,2) 1 1 (2 1,2)", "(3 1,2) 1 1 (3 1,2)", "(3 1,2 2 1) 1 1 (3 1,2 2 1)", "(2 1,2,2) 1 1 (2 1,2,2)"];

pub const THREE_PART_LINK: &str = "(3 1,2,2 1) 1 1 (3 1,2,2 1)";
pub const THREE_PART_DIAGRAMS: [&str; 2] =
    ["((1,((2,1),2,(3,1))),1) ((3,1),2,(2,1))", "((((3,1),2,(1,2)),1),1) ((3,1),2,(2,1))"];

/// Symbols whose diagrams get named in orbit dumps.
pub fn known_symbols() -> Vec<&'static str> {
    let mut v = vec![DH_KNOT, MUTANT_SELF_DUAL, MUTANT_CHIRAL, CHIRAL_LINK, CHIRAL_LINK_SECOND, THREE_PART_LINK];
    v.extend(DH_DIAGRAMS);
    v.extend(DH_FAMILY);
    v.extend(THREE_PART_DIAGRAMS);
    v
}

/// Canonical codes of the known symbols, for naming orbit members.
pub fn known_names(cfg: &ClassifyConfig) -> HashMap<DiagramCode, String> {
    let mut m = HashMap::new();
    for s in known_symbols() {
        let d = built(s);
        m.entry(canonical_code(&d, cfg.reflection)).or_insert_with(|| s.to_string());
    }
    m
}

fn built(s: &str) -> Diagram {
    build(&parse(s).expect("fixture parses")).expect("fixture builds")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: ClassifyConfig,
    pub oracle_checks: bool,
    pub checks: Vec<Check>,
    pub reported: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One `PASS`/`FAIL` line per check, then the reported lines.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out += &format!("{tag}  {}  expected {}  got {}\n", c.name, c.expected, c.actual);
        }
        for c in &self.reported {
            let tag = if c.pass { "same" } else { "DIFF" };
            out += &format!("{tag}  {}  expected {}  got {}\n", c.name, c.expected, c.actual);
        }
        out += &format!("{} passed, {} failed\n", self.passed, self.failed);
        out
    }
}

#[derive(Default)]
struct Checks {
    list: Vec<Check>,
}

impl Checks {
    fn eq<T: std::fmt::Debug + PartialEq>(&mut self, name: &str, expected: T, actual: T) {
        self.list.push(Check {
            name: name.to_string(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
            pass: expected == actual,
        });
    }

    fn holds(&mut self, name: &str, expected: &str, actual: String, pass: bool) {
        self.list.push(Check { name: name.into(), expected: expected.into(), actual, pass });
    }
}

fn analysis(c: &mut Checks, name: &str, s: &str, cfg: &ClassifyConfig) -> Option<Analysis> {
    match analyze(&built(s), cfg) {
        Ok(a) => Some(a),
        Err(e) => {
            c.holds(&format!("{name}/classify"), "a verdict", e.to_string(), false);
            None
        }
    }
}

fn dh_knot(c: &mut Checks, cfg: &ClassifyConfig) {
    let Some(a) = analysis(c, "dh-knot", DH_KNOT, cfg) else { return };
    let v = &a.verdict;
    c.eq("dh-knot/crossings", 14, v.crossings);
    c.eq("dh-knot/components", 1, v.components);
    c.eq("dh-knot/minimal-diagrams", 4, v.minimal_diagrams);
    let listed: Vec<Diagram> = DH_DIAGRAMS.iter().map(|s| built(s)).collect();
    let idx: Vec<Option<usize>> = listed.iter().map(|d| a.class_of(d)).collect();
    c.eq("dh-knot/listed-diagrams-in-orbit", vec![Some(1), Some(2), Some(3), Some(4)], idx.clone());
    c.eq("dh-knot/self-dual-diagrams", Vec::<usize>::new(), v.self_dual_diagrams.clone());
    let g: Vec<_> = listed.iter().map(|d| graph_of(d, false)).collect();
    c.eq("dh-knot/G3~G1*", true, is_isomorphic(&g[2], &dual(&g[0]), cfg.iso_mode));
    c.eq("dh-knot/G4~G2*", true, is_isomorphic(&g[3], &dual(&g[1]), cfg.iso_mode));
    if let [Some(i1), Some(i2), Some(i3), Some(i4)] = idx[..] {
        let have = [(i3, i1), (i4, i2)].iter().all(|p| v.cross_dual_pairs.contains(p));
        c.eq("dh-knot/cross-dual-pairs", true, have);
    }
    c.eq("dh-knot/amphicheiral", true, v.amphicheiral);
    c.eq("dh-knot/dh-link", true, v.dh_link);
    c.eq("dh-knot/single-diagram-criterion", None, single_diagram_criterion(&listed[0], cfg).ok().flatten());
    // the orbit does not depend on where it starts
    let codes = |d: &Diagram| {
        let mut v: Vec<DiagramCode> =
            orbit_with(d, cfg.max_orbit, cfg.reflection).map(|o| o.members.into_iter().map(|m| m.code).collect()).unwrap_or_default();
        v.sort();
        v
    };
    let root = codes(&listed[0]);
    c.eq("dh-knot/orbit-independent-of-start", true, listed.iter().all(|d| codes(d) == root));
}

fn mutants(c: &mut Checks, cfg: &ClassifyConfig) {
    for (name, s, amph) in [("mutant-self-dual", MUTANT_SELF_DUAL, true), ("mutant-chiral", MUTANT_CHIRAL, false)] {
        let Some(a) = analysis(c, name, s, cfg) else { continue };
        let v = &a.verdict;
        c.eq(&format!("{name}/minimal-diagrams"), 1, v.minimal_diagrams);
        let g = graph_of(&built(s), false);
        c.eq(&format!("{name}/G~G*"), amph, is_isomorphic(&g, &dual(&g), cfg.iso_mode));
        c.eq(&format!("{name}/single-diagram-criterion"), Some(amph), single_diagram_criterion(&built(s), cfg).ok().flatten());
        c.eq(&format!("{name}/amphicheiral"), amph, v.amphicheiral);
        c.eq(&format!("{name}/dh-link"), false, v.dh_link);
    }
}

fn chiral_link(c: &mut Checks, r: &mut Checks, cfg: &ClassifyConfig) {
    let Some(a) = analysis(c, "chiral-link", CHIRAL_LINK, cfg) else { return };
    let v = &a.verdict;
    c.eq("chiral-link/crossings", 16, v.crossings);
    c.eq("chiral-link/components", 3, v.components);
    c.eq("chiral-link/minimal-diagrams", 16, v.minimal_diagrams);
    c.eq("chiral-link/amphicheiral", false, v.amphicheiral);
    let partners: Vec<usize> = v.cross_dual_pairs.iter().filter(|p| p.0 == 1).map(|p| p.1).collect();
    c.holds(
        "chiral-link/G1~G*j-for-some-j",
        "nonempty",
        format!("{partners:?}"),
        !partners.is_empty(),
    );
    let second = built(CHIRAL_LINK_SECOND);
    r.eq("chiral-link/second-symbol-in-orbit", true, a.class_of(&second).is_some());
    let (g1, g2) = (graph_of(&built(CHIRAL_LINK), false), graph_of(&second, false));
    r.eq("chiral-link/G1~G2*-for-second-symbol", true, is_isomorphic(&g1, &dual(&g2), cfg.iso_mode));
}

fn dh_family(c: &mut Checks, r: &mut Checks, cfg: &ClassifyConfig) {
    for s in DH_FAMILY {
        let Some(a) = analysis(c, s, s, cfg) else { continue };
        let v = &a.verdict;
        c.eq(&format!("{s}/amphicheiral"), true, v.amphicheiral);
        c.eq(&format!("{s}/dh-link"), true, v.dh_link);
    }
    if let Some(a) = analysis(c, "(2 1,2) 1 1 (2 1,2)", DH_FAMILY[0], cfg) {
        c.eq("(2 1,2) 1 1 (2 1,2)/crossings", 12, a.verdict.crossings);
        c.eq("(2 1,2) 1 1 (2 1,2)/multi-component", true, a.verdict.components > 1);
    }
    let Some(a) = analysis(c, THREE_PART_LINK, THREE_PART_LINK, cfg) else { return };
    c.eq(&format!("{THREE_PART_LINK}/dh-link"), true, a.verdict.dh_link);
    let ds: Vec<Diagram> = THREE_PART_DIAGRAMS.iter().map(|s| built(s)).collect();
    c.eq(&format!("{THREE_PART_LINK}/listed-diagrams-in-orbit"), true, ds.iter().all(|d| a.class_of(d).is_some()));
    let g: Vec<_> = ds.iter().map(|d| graph_of(d, false)).collect();
    r.eq(&format!("{THREE_PART_LINK}/G1~G2*"), true, is_isomorphic(&g[0], &dual(&g[1]), cfg.iso_mode));
}

fn small_knots(c: &mut Checks, cfg: &ClassifyConfig) {
    for (s, amph) in [("3", false), ("2 2", true)] {
        if let Some(a) = analysis(c, s, s, cfg) {
            c.eq(&format!("{s}/amphicheiral"), amph, a.verdict.amphicheiral);
        }
    }
}

fn family_symbols(c: &mut Checks) {
    for (p, k, want) in [
        ("2 1,3", 1, DH_KNOT),
        ("2 1,2", 1, "(2 1,2) 1 1 (2 1,2)"),
        ("2 1,2,2", 2, "(2 1,2,2) 1 1 1 1 1 1 (2 1,2,2)"),
    ] {
        let params = FamilyParams { pretzel: p.parse().unwrap(), k };
        let got = generate_family(&params).map(|e| render(&e)).unwrap_or_else(|e| e.to_string());
        c.eq(&format!("family/({p}) k={k}"), want.to_string(), got);
    }
}

fn scans(r: &mut Checks, cfg: &ClassifyConfig) {
    let mut instances: Vec<ScanInstance> = ["2 1,2", "3 1,2", "2 1,2,2"]
        .iter()
        .map(|p| ScanInstance::Twisted { pretzel: p.parse().unwrap(), k: 1 })
        .collect();
    instances.push(ScanInstance::Twisted { pretzel: "2 1,2,2".parse().unwrap(), k: 2 });
    instances.extend(integer_pretzels(16, 1).into_iter().map(|p| ScanInstance::Twisted { pretzel: p, k: 1 }));
    let report = scan_family(&instances, 20, cfg);
    for e in report.entries {
        let actual = match &e.verdict {
            Some(v) => format!("amphicheiral={} dh_link={} self_dual={}", v.amphicheiral, v.dh_link, v.self_dual_diagrams.len()),
            None => e.notice.clone().unwrap_or_default(),
        };
        r.holds(
            &format!("scan/{}", e.symbol),
            &format!("{:?}", e.expectation),
            actual,
            e.outcome == crate::chirality::Outcome::Agrees,
        );
    }
}

fn oracles(c: &mut Checks, cfg: &ClassifyConfig) {
    for s in [DH_KNOT, MUTANT_SELF_DUAL, MUTANT_CHIRAL, CHIRAL_LINK, DH_FAMILY[0], "3 2 1 2"] {
        let d = built(s);
        let Ok(o) = orbit_with(&d, cfg.max_orbit, cfg.reflection) else {
            c.holds(&format!("oracle/{s}"), "orbit", "overflow".into(), false);
            continue;
        };
        let b0 = bracket(&d).ok();
        // components of a link may be traversed differently on each member
        let norm = |m: &Diagram| if m.component_count() == 1 { normalized(m).ok() } else { link_normalized(m).ok() };
        let n0 = norm(&d);
        c.eq(&format!("oracle/{s}/bracket-constant"), true, o.diagrams().all(|m| bracket(m).ok() == b0));
        c.eq(&format!("oracle/{s}/normalized-constant"), true, o.diagrams().all(|m| norm(m) == n0));
    }
    for (s, sym) in [("3", false), ("2 2", true), (DH_KNOT, true), (MUTANT_SELF_DUAL, true)] {
        c.eq(&format!("oracle/{s}/mirror-symmetric"), Some(sym), mirror_symmetric(&built(s)).ok());
    }
}

pub fn verify(cfg: &ClassifyConfig, oracle_checks: bool) -> VerifyReport {
    let mut c = Checks::default();
    let mut r = Checks::default();
    dh_knot(&mut c, cfg);
    mutants(&mut c, cfg);
    chiral_link(&mut c, &mut r, cfg);
    dh_family(&mut c, &mut r, cfg);
    small_knots(&mut c, cfg);
    family_symbols(&mut c);
    if oracle_checks {
        oracles(&mut c, cfg);
    }
    scans(&mut r, cfg);
    let passed = c.list.iter().filter(|x| x.pass).count();
    VerifyReport {
        config: *cfg,
        oracle_checks,
        failed: c.list.len() - passed,
        passed,
        checks: c.list,
        reported: r.list,
    }
}
