//! `altlink`: flype orbits, checkerboard graphs and amphicheirality of
//! reduced alternating links given in Conway notation.
//!
//! Exit codes: 0 success, 1 a fixture check failed, 2 the input or the
//! command line could not be parsed, 3 a diagram precondition failed,
//! 4 an orbit exceeded `--max-orbit`, 5 an output file could not be written.

mod config;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use altlink::checkerboard::{dual, graph_of, IsoMode, PlaneGraph};
use altlink::chirality::{
    analyze, check_preconditions, integer_pretzels, scan_family, ClassifyError, ScanInstance, ScanReport,
};
use altlink::conway::{parse, PretzelTangle, RationalTangle};
use altlink::diagram::{build, canonical_code, BuildError, Diagram};
use altlink::fixtures::{known_names, verify};
use altlink::flype::{orbit_with, Orbit, OrbitError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use config::{Format, Overrides, Reflection, RunConfig};

#[derive(Parser)]
#[command(name = "altlink", version, about = "Flype orbits and amphicheirality of alternating links")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML file overriding the bundled defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_iso_mode)]
    iso_mode: Option<IsoMode>,
    #[arg(long, global = true, value_enum)]
    reflection: Option<Reflection>,
    #[arg(long, global = true)]
    max_orbit: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also run the bracket oracles (verify only).
    #[arg(long, global = true)]
    oracle_checks: bool,
    /// Write output files here instead of printing to stdout.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

fn parse_iso_mode(s: &str) -> Result<IsoMode, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Amphicheirality verdict and graph data for one link.
    Classify { conway: String },
    /// Minimal diagrams of the flype orbit.
    Orbit { conway: String },
    /// Checkerboard graphs of the diagram or of its whole orbit.
    Graphs {
        conway: String,
        #[arg(long, value_enum, default_value = "both")]
        which: Which,
    },
    /// Classify a family of links and compare with the expected verdicts.
    Scan(ScanArgs),
    /// Check every reference fixture; exits 1 if any check fails.
    #[command(name = "verify-fixtures", visible_alias = "verify")]
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    G,
    Gdual,
    Both,
    AllOrbit,
}

#[derive(Args)]
struct ScanArgs {
    /// Pretzel template such as "p 1,2"; the letter p is replaced by each
    /// value of --p.
    #[arg(long)]
    pretzel: Option<String>,
    /// Inclusive range for p, e.g. 2..4. An empty range scans nothing.
    #[arg(long, value_parser = parse_range)]
    p: Option<(u32, u32)>,
    /// Scan every oriented integer pretzel within the crossing cap.
    #[arg(long)]
    integer_pretzels: bool,
    /// Twist parameter: the middle is 4k-2 ones.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Rational tangle placed between the two pretzels instead of the twist.
    #[arg(long)]
    middle: Option<String>,
    /// Reverse the second pretzel (needs --middle).
    #[arg(long, requires = "middle")]
    reversed: bool,
    #[arg(long, default_value_t = 16)]
    cap: usize,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected a range like 2..4, got {s:?}");
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

#[derive(Debug)]
enum Failure {
    Checks,
    Parse(String),
    Precondition(String),
    Overflow(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Checks => 1,
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Overflow(_) => 4,
            Failure::Io(_) => 5,
        }
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::UnknownPolyhedron(_) | BuildError::SlotCount { .. } | BuildError::NestedPolyhedron(_) => {
                Failure::Parse(e.to_string())
            }
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Precondition(_) => Failure::Precondition(e.to_string()),
            ClassifyError::Orbit(o) => o.into(),
        }
    }
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        Failure::Overflow(e.to_string())
    }
}

fn io(e: std::io::Error, path: &Path) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

struct Ctx {
    cfg: RunConfig,
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    if let Some(n) = g.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let flags = Overrides {
        iso_mode: g.iso_mode,
        reflection: g.reflection,
        max_orbit: g.max_orbit,
        format: g.format,
        oracle_checks: g.oracle_checks,
    };
    let cfg = match RunConfig::load(g.config.as_deref(), &flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx { cfg, out_dir: g.out_dir.clone() };
    let result = match &cli.command {
        Command::Classify { conway } => cmd_classify(&ctx, conway),
        Command::Orbit { conway } => cmd_orbit(&ctx, conway),
        Command::Graphs { conway, which } => cmd_graphs(&ctx, conway, *which),
        Command::Scan(args) => cmd_scan(&ctx, args),
        Command::Verify => cmd_verify(&ctx),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Checks => {}
                Failure::Parse(m) | Failure::Precondition(m) | Failure::Overflow(m) | Failure::Io(m) => {
                    eprintln!("error: {m}")
                }
            }
            ExitCode::from(f.code())
        }
    }
}

/// Conway notation has no crossingless one-component diagram, so the
/// unknot is accepted by name.
fn diagram(conway: &str) -> Result<Diagram, Failure> {
    if conway.trim() == "unknot" {
        return Ok(Diagram::unknot());
    }
    let expr = parse(conway).map_err(|e| Failure::Parse(e.to_string()))?;
    Ok(build(&expr)?)
}

fn not_dot(ctx: &Ctx) -> Result<(), Failure> {
    if ctx.cfg.format == Format::Dot {
        return Err(Failure::Parse("dot output is only available for graphs".into()));
    }
    Ok(())
}

/// Prints `text`, or writes it to `name` under `--out-dir`.
fn emit(ctx: &Ctx, name: &str, text: &str) -> Result<(), Failure> {
    match &ctx.out_dir {
        None => {
            out(text);
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| io(e, &path))
        }
    }
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn out(text: &str) {
    let mut o = std::io::stdout().lock();
    if let Err(e) = o.write_all(text.as_bytes()).and_then(|_| o.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(5);
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn pairs(p: &[(usize, usize)]) -> String {
    let v: Vec<String> = p.iter().map(|(i, j)| format!("G{i}~G{j}*")).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(" ")
    }
}

fn indices(v: &[usize]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn cmd_classify(ctx: &Ctx, conway: &str) -> Result<(), Failure> {
    not_dot(ctx)?;
    let d = diagram(conway)?;
    let a = analyze(&d, &ctx.cfg.classify())?;
    let v = &a.verdict;
    let text = match ctx.cfg.format {
        Format::Json => pretty(&json!({
            "input": conway,
            "config": ctx.cfg,
            "verdict": v,
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "link                {conway}");
            let _ = writeln!(s, "crossings           {}", v.crossings);
            let _ = writeln!(s, "components          {}", v.components);
            let _ = writeln!(s, "minimal diagrams    {}", v.minimal_diagrams);
            let _ = writeln!(s, "orbit members       {}", v.orbit_members);
            let _ = writeln!(s, "amphicheiral        {}", v.amphicheiral);
            let _ = writeln!(s, "self-dual diagrams  {}", indices(&v.self_dual_diagrams));
            let _ = writeln!(s, "cross-dual pairs    {}", pairs(&v.cross_dual_pairs));
            let _ = writeln!(s, "dh link             {}", v.dh_link);
            let _ = writeln!(s, "iso mode            {}", v.iso_mode_used);
            let _ = writeln!(s, "reflection          {}", if ctx.cfg.reflection == Reflection::Preserving { "preserving" } else { "reflecting" });
            s
        }
    };
    emit(ctx, "classify.txt", &text)
}

fn checked_orbit(ctx: &Ctx, d: &Diagram) -> Result<Orbit, Failure> {
    check_preconditions(d).map_err(|p| Failure::from(ClassifyError::Precondition(p)))?;
    let cfg = ctx.cfg.classify();
    Ok(orbit_with(d, cfg.max_orbit, cfg.reflection)?)
}

fn cmd_orbit(ctx: &Ctx, conway: &str) -> Result<(), Failure> {
    not_dot(ctx)?;
    let d = diagram(conway)?;
    let orbit = checked_orbit(ctx, &d)?;
    let names = named(ctx, conway, &d);
    let dump = orbit.dump(&names);
    let text = match ctx.cfg.format {
        Format::Json => pretty(&dump),
        _ => {
            let mut s = String::new();
            for e in dump.as_array().expect("dump is a list") {
                let path: Vec<String> =
                    e["path"].as_array().into_iter().flatten().map(|x| x.to_string()).collect();
                let _ = writeln!(
                    s,
                    "{:>3}  members {:<3} path {:<12} {}",
                    e["index"],
                    e["members"].as_array().map_or(0, |m| m.len()),
                    path.join(">"),
                    e["conway"].as_str().unwrap_or("-"),
                );
            }
            let _ = writeln!(s, "{} minimal diagrams, {} orbit members", orbit.minimal_count(), orbit.len());
            s
        }
    };
    emit(ctx, "orbit.json", &text)
}

/// Known fixture names plus the input itself.
fn named(ctx: &Ctx, conway: &str, d: &Diagram) -> HashMap<altlink::diagram::DiagramCode, String> {
    let cfg = ctx.cfg.classify();
    let mut names = known_names(&cfg);
    names.insert(canonical_code(d, cfg.reflection), conway.to_string());
    names
}

fn graph_text(ctx: &Ctx, g: &PlaneGraph, name: &str) -> String {
    match ctx.cfg.format {
        Format::Dot => g.to_dot(name),
        _ => pretty(&json!({ "name": name, "graph": g.to_json() })),
    }
}

fn cmd_graphs(ctx: &Ctx, conway: &str, which: Which) -> Result<(), Failure> {
    let d = diagram(conway)?;
    let diagrams: Vec<Diagram> = if which == Which::AllOrbit {
        let orbit = checked_orbit(ctx, &d)?;
        orbit.minimal_diagrams().iter().map(|g| orbit.members[g[0]].diagram.clone()).collect()
    } else {
        vec![d]
    };
    let ext = if ctx.cfg.format == Format::Dot { "dot" } else { "json" };
    let mut outputs = Vec::new();
    for (i, m) in diagrams.iter().enumerate() {
        let g = graph_of(m, false);
        let n = i + 1;
        if which != Which::Gdual {
            outputs.push((format!("G{n}"), graph_text(ctx, &g, &format!("G{n}"))));
        }
        if which != Which::G {
            let gd = dual(&g);
            outputs.push((format!("G{n}_dual"), graph_text(ctx, &gd, &format!("G{n}*"))));
        }
    }
    match &ctx.out_dir {
        Some(_) => {
            for (name, text) in &outputs {
                emit(ctx, &format!("{name}.{ext}"), text)?;
            }
            Ok(())
        }
        None => {
            for (_, text) in &outputs {
                out(text);
            }
            Ok(())
        }
    }
}

fn scan_instances(args: &ScanArgs) -> Result<Vec<ScanInstance>, Failure> {
    let bad = |e: String| Failure::Parse(e);
    let mut pretzels: Vec<PretzelTangle> = Vec::new();
    if let Some(t) = &args.pretzel {
        match args.p {
            Some((lo, hi)) if t.contains('p') => {
                for p in lo..=hi {
                    let s = t.replace('p', &p.to_string());
                    pretzels.push(s.parse().map_err(|e| bad(format!("{s:?}: {e}")))?);
                }
            }
            Some(_) => return Err(bad("--p needs a template containing the letter p".into())),
            None => pretzels.push(t.parse().map_err(|e| bad(format!("{t:?}: {e}")))?),
        }
    } else if args.p.is_some() {
        return Err(bad("--p needs --pretzel".into()));
    }
    if args.integer_pretzels {
        pretzels.extend(integer_pretzels(args.cap, args.k));
    }
    let middle: Option<RationalTangle> = match &args.middle {
        Some(m) => Some(m.parse().map_err(|e| bad(format!("{m:?}: {e}")))?),
        None => None,
    };
    Ok(pretzels
        .into_iter()
        .map(|pretzel| match &middle {
            Some(m) => ScanInstance::Sandwich { pretzel, middle: m.clone(), reversed: args.reversed },
            None => ScanInstance::Twisted { pretzel, k: args.k },
        })
        .collect())
}

fn cmd_scan(ctx: &Ctx, args: &ScanArgs) -> Result<(), Failure> {
    not_dot(ctx)?;
    let instances = scan_instances(args)?;
    let report = scan_family(&instances, args.cap, &ctx.cfg.classify());
    let text = match ctx.cfg.format {
        Format::Json => pretty(&report),
        _ => scan_table(&report),
    };
    emit(ctx, "scan.json", &text)
}

fn scan_table(r: &ScanReport) -> String {
    let mut s = String::new();
    for e in &r.entries {
        let got = match &e.verdict {
            Some(v) => format!(
                "amphicheiral={} dh={} self-dual={}",
                v.amphicheiral,
                v.dh_link,
                v.self_dual_diagrams.len()
            ),
            None => e.notice.clone().unwrap_or_default(),
        };
        let _ = writeln!(s, "{:<15} {:<40} expect {:<24} {got}", format!("{:?}", e.outcome), e.symbol, format!("{:?}", e.expectation));
    }
    let b = &r.scoreboard;
    let _ = writeln!(
        s,
        "{} instances: {} agree, {} counterexamples, {} without expectation, {} skipped",
        b.instances, b.agrees, b.counterexamples, b.no_expectation, b.skipped
    );
    s
}

fn cmd_verify(ctx: &Ctx) -> Result<(), Failure> {
    not_dot(ctx)?;
    let report = verify(&ctx.cfg.classify(), ctx.cfg.oracle_checks);
    let text = match ctx.cfg.format {
        Format::Json => pretty(&report),
        _ => report.to_table(),
    };
    emit(ctx, "verify.json", &text)?;
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4"), Ok((2, 4)));
        assert_eq!(parse_range("2..=4"), Ok((2, 4)));
        assert_eq!(parse_range("3"), Ok((3, 3)));
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn template_expands_over_range() {
        let args = ScanArgs {
            pretzel: Some("p 1,2".into()),
            p: Some((2, 4)),
            integer_pretzels: false,
            k: 1,
            middle: None,
            reversed: false,
            cap: 16,
        };
        let inst = scan_instances(&args).unwrap();
        let shown: Vec<String> = inst.iter().map(|i| i.pretzel().to_string()).collect();
        assert_eq!(shown.len(), 3);
        assert!(shown[0].contains("2 1"));
        assert!(shown[2].contains("4 1"));
        let empty = ScanArgs { p: Some((4, 2)), ..args };
        assert!(scan_instances(&empty).unwrap().is_empty());
    }
}
