//! One line per acceptance criterion. Runs without the test harness so the
//! lines always reach the output; exits nonzero if any criterion fails.

mod common;

use altlink::bracket::{bracket, max_writhe, mirror_symmetric, normalize, writhe, LaurentPoly};
use altlink::checkerboard::{dual, graph_of, is_isomorphic, reconstruct, unshaded_graph_of, IsoMode, PlaneGraph};
use altlink::chirality::{analyze, Analysis, ClassifyConfig};
use altlink::conway::parse;
use altlink::diagram::{build, canonical_code, sphere_iso, Diagram, ReflectionPolicy};
use altlink::fixtures::{
    verify, CHIRAL_LINK, DH_DIAGRAMS, DH_FAMILY, DH_KNOT, MUTANT_CHIRAL, MUTANT_SELF_DUAL, THREE_PART_LINK,
};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Outcome = Result<String, String>;

fn built(s: &str) -> Diagram {
    build(&parse(s).expect("fixture parses")).expect("fixture builds")
}

fn analysis(s: &str) -> Result<Analysis, String> {
    analyze(&built(s), &ClassifyConfig::default()).map_err(|e| format!("{s}: {e}"))
}

fn expect(ok: bool, what: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what)
    }
}

fn dh_knot() -> Outcome {
    let a = analysis(DH_KNOT)?;
    let v = &a.verdict;
    expect(v.minimal_diagrams == 4, format!("{} minimal diagrams", v.minimal_diagrams))?;
    let listed: Vec<Diagram> = DH_DIAGRAMS.iter().map(|s| built(s)).collect();
    let classes: Vec<Option<usize>> = listed.iter().map(|d| a.class_of(d)).collect();
    expect(classes == [Some(1), Some(2), Some(3), Some(4)], format!("listed diagrams fall in classes {classes:?}"))?;
    let g: Vec<PlaneGraph> = listed.iter().map(|d| graph_of(d, false)).collect();
    let self_dual: Vec<usize> = (0..4).filter(|&i| is_isomorphic(&g[i], &dual(&g[i]), IsoMode::Abstract)).collect();
    expect(self_dual.is_empty(), format!("G_i ~ G*_i for i in {self_dual:?}"))?;
    expect(v.self_dual_diagrams.is_empty(), "verdict lists self-dual diagrams".into())?;
    expect(is_isomorphic(&g[2], &dual(&g[0]), IsoMode::Abstract), "G3 !~ G1*".into())?;
    expect(is_isomorphic(&g[3], &dual(&g[1]), IsoMode::Abstract), "G4 !~ G2*".into())?;
    expect(v.amphicheiral && v.dh_link, format!("amphicheiral={} dh_link={}", v.amphicheiral, v.dh_link))?;
    Ok(format!("4 minimal diagrams ({} orbit members), G3~G1*, G4~G2*, amphicheiral, DH", v.orbit_members))
}

fn mutants() -> Outcome {
    for (s, amph) in [(MUTANT_SELF_DUAL, true), (MUTANT_CHIRAL, false)] {
        let a = analysis(s)?;
        let v = &a.verdict;
        expect(v.minimal_diagrams == 1, format!("{s}: {} minimal diagrams", v.minimal_diagrams))?;
        let g = graph_of(&built(s), false);
        let sd = is_isomorphic(&g, &dual(&g), IsoMode::Abstract);
        expect(sd == amph, format!("{s}: G~G* is {sd}"))?;
        expect(v.amphicheiral == amph, format!("{s}: amphicheiral={}", v.amphicheiral))?;
    }
    Ok(format!("{MUTANT_SELF_DUAL} self-dual and amphicheiral, {MUTANT_CHIRAL} chiral"))
}

fn chiral_link() -> Outcome {
    let a = analysis(CHIRAL_LINK)?;
    let v = &a.verdict;
    expect(v.crossings == 16 && v.components == 3, format!("{} crossings, {} components", v.crossings, v.components))?;
    expect(v.minimal_diagrams == 16, format!("{} minimal diagrams", v.minimal_diagrams))?;
    expect(!v.amphicheiral, "amphicheiral".into())?;
    // read as: G_1 is the dual graph of some other minimal diagram
    let partners: Vec<usize> = v.cross_dual_pairs.iter().filter(|p| p.0 == 1).map(|p| p.1).collect();
    expect(!partners.is_empty(), "no G_j* is isomorphic to G_1".into())?;
    Ok(format!("16 crossings, 3 components, 16 minimal diagrams, chiral, G1~G{}*", partners[0]))
}

fn family() -> Outcome {
    let mut notes = Vec::new();
    for s in DH_FAMILY.iter().chain([&THREE_PART_LINK]) {
        let a = analysis(s)?;
        let v = &a.verdict;
        expect(v.amphicheiral && v.dh_link, format!("{s}: amphicheiral={} dh_link={}", v.amphicheiral, v.dh_link))?;
        notes.push(format!("{}/{}", v.crossings, v.components));
    }
    let first = analysis(DH_FAMILY[0])?.verdict;
    expect(first.crossings == 12 && first.components > 1, format!("{}: {} crossings", DH_FAMILY[0], first.crossings))?;
    Ok(format!("all amphicheiral DH links (crossings/components {})", notes.join(" ")))
}

/// The identities that must hold for any connected diagram.
fn structural(d: &Diagram) -> Result<(), String> {
    let n = d.crossing_count();
    let g = graph_of(d, false);
    let h = unshaded_graph_of(d, false);
    expect(g.edge_count() == n, format!("|E| = {} for {n} crossings", g.edge_count()))?;
    expect(g.vertex_count() + h.vertex_count() == n + 2, "|V| + |V*| != n + 2".into())?;
    expect(is_isomorphic(&dual(&dual(&g)), &g, IsoMode::Embedded), "dual of dual differs".into())?;
    expect(is_isomorphic(&graph_of(&d.mirror(), false), &dual(&g), IsoMode::Embedded), "G(mirror) !~ G*".into())?;
    let r = d.reduce();
    let p = ReflectionPolicy::PRESERVING;
    expect(r.is_reduced() && canonical_code(&r.reduce(), p) == canonical_code(&r, p), "reduce not idempotent".into())?;
    let back = reconstruct(&graph_of(d, true)).map_err(|e| e.to_string())?;
    expect(sphere_iso(d, &back, p).is_some(), "reconstruction differs".into())
}

fn structure() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let random = 1000;
    for i in 0..random {
        let d = common::diagram(12).new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        structural(&d).map_err(|e| format!("random instance {i}: {e}"))?;
    }
    let mut fixtures = 0;
    for s in [DH_KNOT, MUTANT_SELF_DUAL, MUTANT_CHIRAL, CHIRAL_LINK].iter().chain(DH_FAMILY.iter()).chain(DH_DIAGRAMS.iter()) {
        let a = analysis(s)?;
        for d in a.orbit.diagrams() {
            structural(d).map_err(|e| format!("{s}: {e}"))?;
            fixtures += 1;
        }
    }
    Ok(format!("{random} random diagrams and {fixtures} fixture orbit members, zero failures"))
}

/// Raw and normalized bracket; links take the orientation of greatest writhe
/// since orbit members traverse their components independently.
fn brackets(d: &Diagram) -> Result<(LaurentPoly, LaurentPoly), String> {
    let b = bracket(d).map_err(|e| e.to_string())?;
    let w = if d.component_count() == 1 { writhe(d) } else { max_writhe(d) };
    let n = normalize(&b, w);
    Ok((b, n))
}

/// Every orbit member up to `full` crossings; above that the members at a
/// fixed stride, since one state sum at 20 crossings takes about a second.
fn orbit_oracle(s: &str, full: usize, sample: usize) -> Result<(usize, usize), String> {
    let a = analysis(s)?;
    let root = built(s);
    let (b0, n0) = brackets(&root)?;
    let members: Vec<&Diagram> = a.orbit.diagrams().collect();
    let stride = if root.crossing_count() <= full { 1 } else { members.len().div_ceil(sample).max(1) };
    let mut checked = 0;
    for m in members.iter().step_by(stride) {
        let (b, n) = brackets(m)?;
        expect(b == b0, format!("{s}: bracket changes along the orbit"))?;
        expect(n == n0, format!("{s}: normalized bracket changes along the orbit"))?;
        checked += 1;
    }
    Ok((checked, members.len()))
}

fn oracle() -> Outcome {
    let mut parts = Vec::new();
    for s in [DH_KNOT, MUTANT_SELF_DUAL, MUTANT_CHIRAL, CHIRAL_LINK].iter().chain(DH_FAMILY.iter()).chain([&THREE_PART_LINK]) {
        let (checked, total) = orbit_oracle(s, 16, 3)?;
        if checked < total {
            parts.push(format!("{s}: {checked} of {total} members"));
        }
    }
    for (s, amph) in [("3", false), ("2 2", true), (DH_KNOT, true)] {
        let sym = mirror_symmetric(&built(s)).map_err(|e| e.to_string())?;
        let verdict = analysis(s)?.verdict.amphicheiral;
        expect(sym == amph && verdict == amph, format!("{s}: mirror_symmetric={sym}, amphicheiral={verdict}"))?;
    }
    let mut msg = "bracket and normalized bracket constant on fixture orbits; mirror symmetry agrees".to_string();
    if !parts.is_empty() {
        msg += &format!(" (20-crossing orbits sampled: {})", parts.join(", "));
    }
    Ok(msg)
}

fn determinism() -> Outcome {
    let cfg = ClassifyConfig::default();
    let run = |threads: usize| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        let report = pool.install(|| verify(&cfg, false));
        let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
        Ok(json + &report.to_table())
    };
    let a = run(1)?;
    let b = run(1)?;
    let c = run(4)?;
    expect(a == b, "two single-thread runs differ".into())?;
    expect(a == c, "1 and 4 threads differ".into())?;
    Ok(format!("{} bytes identical across two runs and 1/4 threads", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("DH knot reproduction", dh_knot),
        ("mutant pair", mutants),
        ("chiral 16-crossing link", chiral_link),
        ("family fixtures", family),
        ("structural identities", structure),
        ("oracle consistency", oracle),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
