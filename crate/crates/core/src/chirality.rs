//! Amphicheirality of reduced alternating prime links from their flype
//! orbits, with the checkerboard-graph data used to tell self-dual links
//! from Dasbach-Hougardy links.
//!
//! The decision is made on diagrams: a link is amphicheiral exactly when
//! the mirror of a minimal diagram lies in its flype orbit. Graph
//! isomorphisms are collected alongside but never decide the verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checkerboard::{abstract_signature, dual, embedded_code, graph_of, is_isomorphic, IsoMode, PlaneGraph};
use crate::conway::{
    classify_pretzel, generate_family, generate_sandwich, is_palindromic, FamilyError, FamilyParams,
    PretzelClass, PretzelTangle, RationalTangle,
};
use crate::diagram::{build, BuildError, Diagram, ReflectionPolicy};
use crate::flype::{orbit_with, Orbit, OrbitError, DEFAULT_MAX_ORBIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub iso_mode: IsoMode,
    pub reflection: ReflectionPolicy,
    pub max_orbit: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            iso_mode: IsoMode::Abstract,
            reflection: ReflectionPolicy::PRESERVING,
            max_orbit: DEFAULT_MAX_ORBIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precondition {
    Connected,
    Reduced,
    Alternating,
    Prime,
}

impl std::fmt::Display for Precondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Precondition::Connected => "connected",
            Precondition::Reduced => "reduced",
            Precondition::Alternating => "alternating",
            Precondition::Prime => "prime",
        })
    }
}

#[derive(Debug, Clone, Error)]
pub enum ClassifyError {
    #[error("diagram is not {0}")]
    Precondition(Precondition),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// First failing precondition, checked in the order connected, alternating,
/// reduced, prime.
pub fn check_preconditions(d: &Diagram) -> Result<(), Precondition> {
    if !d.is_connected() {
        return Err(Precondition::Connected);
    }
    if !d.is_alternating() {
        return Err(Precondition::Alternating);
    }
    if !d.is_reduced() {
        return Err(Precondition::Reduced);
    }
    if !d.is_prime() {
        return Err(Precondition::Prime);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub amphicheiral: bool,
    /// 1-based indices of minimal diagrams with `G ≅ G*`.
    pub self_dual_diagrams: Vec<usize>,
    /// Ordered pairs `(i, j)`, `i ≠ j`, with `G_i ≅ G*_j`.
    pub cross_dual_pairs: Vec<(usize, usize)>,
    pub dh_link: bool,
    pub iso_mode_used: IsoMode,
    pub reflection_policy_used: ReflectionPolicy,
    pub crossings: usize,
    pub components: usize,
    /// Number of minimal diagrams, each counted up to reflection of the
    /// sphere and mirror image.
    pub minimal_diagrams: usize,
    /// Number of flype-orbit members under the reflection policy.
    pub orbit_members: usize,
    /// Orbit member (1-based) equal to the mirror of the input.
    pub mirror_member: Option<usize>,
}

/// Orbit, its grouping into minimal diagrams and the verdict built on them.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub orbit: Orbit,
    pub classes: Vec<Vec<usize>>,
    pub verdict: Verdict,
}

impl Analysis {
    /// Minimal-diagram index (1-based) containing `d`, if any.
    pub fn class_of(&self, d: &Diagram) -> Option<usize> {
        let code = crate::flype::projection_code(d);
        self.classes
            .iter()
            .position(|g| g.iter().any(|&m| crate::flype::projection_code(&self.orbit.members[m].diagram) == code))
            .map(|i| i + 1)
    }

    /// Representative diagram of each minimal diagram: the first member
    /// reached.
    pub fn representatives(&self) -> Vec<&Diagram> {
        self.classes.iter().map(|g| &self.orbit.members[g[0]].diagram).collect()
    }
}

/// Checkerboard graph and its dual with keys that are equal whenever the
/// graphs are isomorphic in the configured mode (and, for the embedded
/// modes, only then).
struct Graphs {
    g: PlaneGraph,
    g_dual: PlaneGraph,
    key: GraphKey,
    dual_key: GraphKey,
}

#[derive(PartialEq, Eq, Hash)]
enum GraphKey {
    Code(Vec<u32>),
    Signature(Vec<(usize, usize, Vec<usize>)>),
}

fn graph_key(g: &PlaneGraph, mode: IsoMode) -> GraphKey {
    match mode {
        IsoMode::Abstract => GraphKey::Signature(abstract_signature(g)),
        IsoMode::Embedded => GraphKey::Code(embedded_code(g, false)),
        IsoMode::EmbeddedReflecting => GraphKey::Code(embedded_code(g, true)),
    }
}

fn iso(g: &PlaneGraph, gk: &GraphKey, h: &PlaneGraph, hk: &GraphKey, mode: IsoMode) -> bool {
    gk == hk && (mode != IsoMode::Abstract || is_isomorphic(g, h, mode))
}

pub fn analyze(d: &Diagram, cfg: &ClassifyConfig) -> Result<Analysis, ClassifyError> {
    check_preconditions(d).map_err(ClassifyError::Precondition)?;
    let orbit = orbit_with(d, cfg.max_orbit, cfg.reflection)?;
    let classes = orbit.minimal_diagrams();
    let mirror = d.mirror();
    let mirror_member = orbit.position(&crate::diagram::canonical_code(&mirror, cfg.reflection)).map(|i| i + 1);
    let mode = cfg.iso_mode;

    let graphs: Vec<Graphs> = orbit
        .members
        .par_iter()
        .map(|m| {
            let g = graph_of(&m.diagram, false);
            let g_dual = dual(&g);
            let key = graph_key(&g, mode);
            let dual_key = graph_key(&g_dual, mode);
            Graphs { g, g_dual, key, dual_key }
        })
        .collect();
    // members of a class whose graphs coincide as maps add nothing new
    let distinct: Vec<Vec<usize>> = classes
        .par_iter()
        .map(|group| {
            let mut seen = std::collections::HashSet::new();
            group
                .iter()
                .copied()
                .filter(|&m| seen.insert(embedded_code(&graphs[m].g, mode != IsoMode::Embedded)))
                .collect()
        })
        .collect();
    let self_dual_diagrams: Vec<usize> = distinct
        .par_iter()
        .enumerate()
        .filter(|(_, group)| {
            group.iter().any(|&m| {
                let x = &graphs[m];
                iso(&x.g, &x.key, &x.g_dual, &x.dual_key, mode)
            })
        })
        .map(|(i, _)| i + 1)
        .collect();
    let k = classes.len();
    let cross_dual_pairs: Vec<(usize, usize)> = (0..k * k)
        .into_par_iter()
        .filter_map(|ij| {
            let (i, j) = (ij / k, ij % k);
            if i == j {
                return None;
            }
            let hit = distinct[i].iter().any(|&a| {
                distinct[j].iter().any(|&b| {
                    let (x, y) = (&graphs[a], &graphs[b]);
                    iso(&x.g, &x.key, &y.g_dual, &y.dual_key, mode)
                })
            });
            hit.then_some((i + 1, j + 1))
        })
        .collect();
    let amphicheiral = mirror_member.is_some();
    let verdict = Verdict {
        amphicheiral,
        dh_link: amphicheiral && self_dual_diagrams.is_empty(),
        self_dual_diagrams,
        cross_dual_pairs,
        iso_mode_used: mode,
        reflection_policy_used: cfg.reflection,
        crossings: d.crossing_count(),
        components: d.component_count(),
        minimal_diagrams: k,
        orbit_members: orbit.len(),
        mirror_member,
    };
    Ok(Analysis { orbit, classes, verdict })
}

pub fn classify(d: &Diagram, cfg: &ClassifyConfig) -> Result<Verdict, ClassifyError> {
    Ok(analyze(d, cfg)?.verdict)
}

/// `G(d) ≅ G*(d)` when `d` is the only minimal diagram of its link, which
/// then decides amphicheirality; `None` otherwise.
pub fn single_diagram_criterion(d: &Diagram, cfg: &ClassifyConfig) -> Result<Option<bool>, ClassifyError> {
    check_preconditions(d).map_err(ClassifyError::Precondition)?;
    let orbit = orbit_with(d, cfg.max_orbit, cfg.reflection)?;
    if orbit.minimal_count() != 1 {
        return Ok(None);
    }
    let g = graph_of(d, false);
    Ok(Some(is_isomorphic(&g, &dual(&g), cfg.iso_mode)))
}

/// One link of a scanned family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum ScanInstance {
    /// `(p) 1^(4k-2) (p)`.
    Twisted { pretzel: PretzelTangle, k: u32 },
    /// `(p) t (p)`, or `(p) t (reverse p)` when `reversed`.
    Sandwich { pretzel: PretzelTangle, middle: RationalTangle, reversed: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    DhLink,
    Chiral,
    AmphicheiralSelfDual,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Agrees,
    Counterexample,
    NoExpectation,
    Skipped,
}

impl ScanInstance {
    pub fn pretzel(&self) -> &PretzelTangle {
        match self {
            ScanInstance::Twisted { pretzel, .. } | ScanInstance::Sandwich { pretzel, .. } => pretzel,
        }
    }

    pub fn expression(&self) -> Result<crate::conway::TangleExpr, FamilyError> {
        match self {
            ScanInstance::Twisted { pretzel, k } => generate_family(&FamilyParams { pretzel: pretzel.clone(), k: *k }),
            ScanInstance::Sandwich { pretzel, middle, reversed } => generate_sandwich(pretzel, middle, *reversed),
        }
    }

    /// What the conjectured statements predict. A sandwich whose middle is a
    /// run of `4k-2` ones is the twisted form and is judged as such.
    pub fn expectation(&self) -> Expectation {
        let class = classify_pretzel(self.pretzel());
        match self {
            ScanInstance::Twisted { .. } => twisted_expectation(class),
            ScanInstance::Sandwich { middle, reversed: false, .. } => {
                let e = middle.entries();
                if e.iter().all(|&x| x == 1) && e.len() % 4 == 2 {
                    twisted_expectation(class)
                } else if class.oriented && is_palindromic(middle) {
                    Expectation::AmphicheiralSelfDual
                } else {
                    Expectation::None
                }
            }
            ScanInstance::Sandwich { middle, reversed: true, .. } => {
                if is_palindromic(middle) {
                    Expectation::AmphicheiralSelfDual
                } else {
                    Expectation::None
                }
            }
        }
    }
}

fn twisted_expectation(class: PretzelClass) -> Expectation {
    match (class.oriented, class.integer) {
        (true, false) => Expectation::DhLink,
        (true, true) => Expectation::Chiral,
        (false, _) => Expectation::None,
    }
}

fn judge(e: Expectation, v: &Verdict) -> Outcome {
    let ok = match e {
        Expectation::None => return Outcome::NoExpectation,
        Expectation::DhLink => v.dh_link,
        Expectation::Chiral => !v.amphicheiral,
        Expectation::AmphicheiralSelfDual => v.amphicheiral && !v.self_dual_diagrams.is_empty(),
    };
    if ok {
        Outcome::Agrees
    } else {
        Outcome::Counterexample
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub symbol: String,
    pub instance: ScanInstance,
    pub pretzel_class: PretzelClass,
    pub expectation: Expectation,
    pub outcome: Outcome,
    pub verdict: Option<Verdict>,
    /// Why the instance was not classified.
    pub notice: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Scoreboard {
    pub instances: usize,
    pub agrees: usize,
    pub counterexamples: usize,
    pub no_expectation: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub crossing_cap: usize,
    pub entries: Vec<ScanEntry>,
    pub scoreboard: Scoreboard,
}

fn scan_one(inst: &ScanInstance, crossing_cap: usize, cfg: &ClassifyConfig) -> ScanEntry {
    let class = classify_pretzel(inst.pretzel());
    let expectation = inst.expectation();
    let skipped = |symbol: String, notice: String| ScanEntry {
        symbol,
        instance: inst.clone(),
        pretzel_class: class,
        expectation,
        outcome: Outcome::Skipped,
        verdict: None,
        notice: Some(notice),
    };
    let expr = match inst.expression() {
        Ok(e) => e,
        Err(e) => return skipped(String::new(), e.to_string()),
    };
    let symbol = crate::conway::render(&expr);
    let n = expr.crossing_count();
    if n > crossing_cap {
        return skipped(symbol, format!("{n} crossings exceed the cap of {crossing_cap}"));
    }
    let verdict = build(&expr)
        .map_err(|e: BuildError| e.to_string())
        .and_then(|d| classify(&d, cfg).map_err(|e| e.to_string()));
    match verdict {
        Ok(v) => ScanEntry {
            symbol,
            instance: inst.clone(),
            pretzel_class: class,
            expectation,
            outcome: judge(expectation, &v),
            verdict: Some(v),
            notice: None,
        },
        Err(e) => skipped(symbol, e),
    }
}

/// Classifies every instance and tallies the outcomes. Entries keep the
/// input order.
pub fn scan_family(instances: &[ScanInstance], crossing_cap: usize, cfg: &ClassifyConfig) -> ScanReport {
    let entries: Vec<ScanEntry> = instances.par_iter().map(|i| scan_one(i, crossing_cap, cfg)).collect();
    let mut board = Scoreboard { instances: entries.len(), ..Default::default() };
    for e in &entries {
        match e.outcome {
            Outcome::Agrees => board.agrees += 1,
            Outcome::Counterexample => board.counterexamples += 1,
            Outcome::NoExpectation => board.no_expectation += 1,
            Outcome::Skipped => board.skipped += 1,
        }
    }
    ScanReport { crossing_cap, entries, scoreboard: board }
}

/// Oriented integer pretzels `(a1,...,an)`, entries at least 2, whose twisted
/// form with the given `k` stays within `crossing_cap`. Of a list and its
/// reverse only the lexicographically smaller is kept.
pub fn integer_pretzels(crossing_cap: usize, k: u32) -> Vec<PretzelTangle> {
    let twist = (4 * k as usize).saturating_sub(2);
    if crossing_cap < twist {
        return Vec::new();
    }
    let budget = (crossing_cap - twist) / 2;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(cur) = stack.pop() {
        let used: u32 = cur.iter().sum();
        if cur.len() >= 2 {
            let rev: Vec<u32> = cur.iter().rev().copied().collect();
            if cur < rev {
                let comps = cur.iter().map(|&a| RationalTangle::new(vec![a]).unwrap()).collect();
                out.push(PretzelTangle::new(comps).unwrap());
            }
        }
        for a in 2..=(budget as u32).saturating_sub(used) {
            let mut next = cur.clone();
            next.push(a);
            stack.push(next);
        }
    }
    out.sort_by(|a, b| {
        let key = |p: &PretzelTangle| p.components().iter().map(|t| t.entries()[0]).collect::<Vec<_>>();
        (a.components().len(), key(a)).cmp(&(b.components().len(), key(b)))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;

    fn built(s: &str) -> Diagram {
        build(&parse(s).unwrap()).unwrap()
    }

    fn verdict(s: &str) -> Verdict {
        classify(&built(s), &ClassifyConfig::default()).unwrap()
    }

    #[test]
    fn small_knots() {
        assert!(!verdict("3").amphicheiral);
        let v = verdict("2 2");
        assert!(v.amphicheiral);
        assert_eq!(v.self_dual_diagrams, vec![1]);
        assert!(!v.dh_link);
    }

    #[test]
    fn mirror_has_same_verdict() {
        for s in ["3", "2 2", "3 2", ".(2,3).(2,3)", "(2 1,2) 1 1 (2 1,2)"] {
            let d = built(s);
            let cfg = ClassifyConfig::default();
            assert_eq!(
                classify(&d, &cfg).unwrap().amphicheiral,
                classify(&d.mirror(), &cfg).unwrap().amphicheiral,
                "{s}"
            );
        }
    }

    #[test]
    fn verdict_does_not_depend_on_orbit_start() {
        let cfg = ClassifyConfig::default();
        for s in ["(2 1,3) 1 1 (2 1,3)", "3 2 1 2"] {
            let a = analyze(&built(s), &cfg).unwrap();
            for m in a.orbit.diagrams() {
                let v = classify(m, &cfg).unwrap();
                assert_eq!(v.amphicheiral, a.verdict.amphicheiral);
                assert_eq!(v.minimal_diagrams, a.verdict.minimal_diagrams);
            }
        }
    }

    #[test]
    fn preconditions_are_named() {
        let d = built("2 1 1").connected_sum(&built("3"));
        match classify(&d, &ClassifyConfig::default()) {
            Err(ClassifyError::Precondition(Precondition::Prime)) => {}
            other => panic!("{other:?}"),
        }
        let curl = crate::diagram::tests::curl(true);
        match classify(&curl, &ClassifyConfig::default()) {
            Err(ClassifyError::Precondition(p)) => assert_eq!(p, Precondition::Reduced),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_diagram_criterion_needs_one_minimal_diagram() {
        let cfg = ClassifyConfig::default();
        assert_eq!(single_diagram_criterion(&built("(2 1,3) 1 1 (2 1,3)"), &cfg).unwrap(), None);
        assert_eq!(single_diagram_criterion(&built("3"), &cfg).unwrap(), Some(false));
    }

    #[test]
    fn integer_pretzel_enumeration() {
        let ps = integer_pretzels(16, 1);
        let shown: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["(2,3)", "(2,4)", "(2,5)", "(3,4)", "(2,2,3)"]);
        assert!(integer_pretzels(1, 1).is_empty());
    }

    #[test]
    fn sandwich_with_twist_run_is_judged_as_twisted() {
        let p: PretzelTangle = "2 1,3".parse().unwrap();
        let s = ScanInstance::Sandwich { pretzel: p.clone(), middle: "1 1".parse().unwrap(), reversed: false };
        assert_eq!(s.expectation(), Expectation::DhLink);
        let s = ScanInstance::Sandwich { pretzel: p, middle: "2 1 2".parse().unwrap(), reversed: false };
        assert_eq!(s.expectation(), Expectation::AmphicheiralSelfDual);
    }
}
