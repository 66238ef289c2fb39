//! Flypes on reduced alternating diagrams and the orbits they generate.
//!
//! A site is a crossing `c` with two consecutive darts running into a tangle
//! `T` bounded by four edges. Roles are named as if `c` sat west of `T`:
//! `c` has darts SE, NE, NW, SW (counterclockwise), its NE/SE darts meet the
//! ports NW/SW of `T`, and `T` leaves through ports NE/SE. The flype turns
//! `T` over about the horizontal axis and moves `c` to its east side.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{
    canonical_code, crossing_of, next_ccw, pd, prev_ccw, Dart, Diagram, DiagramCode,
    ReflectionPolicy,
};

pub const DEFAULT_MAX_ORBIT: usize = 4096;

/// An edge given by its dart inside the tangle and its dart outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CutEdge {
    pub inside: Dart,
    pub outside: Dart,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FlypeSite {
    pub crossing: usize,
    /// Cut edges at the tangle ports NW, SW, NE, SE.
    pub cut: [CutEdge; 4],
    /// Crossings of the tangle, ascending.
    pub side: Vec<usize>,
}

impl FlypeSite {
    /// The dart of the flype crossing in the SE role.
    fn c_se(&self) -> Dart {
        self.cut[1].outside
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlypeError {
    #[error("invalid flype site at crossing {0}")]
    InvalidSite(usize),
}

#[derive(Debug, Clone, Error)]
pub enum OrbitError {
    #[error("flype orbit exceeded {max_size} diagrams")]
    Overflow { max_size: usize, partial: Orbit },
}

/// Crossings reachable from `start` without using the edges at `cut`.
fn region(d: &Diagram, start: usize, cut: &[Dart]) -> Vec<bool> {
    let mut seen = vec![false; d.crossing_count()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for x in 4 * c..4 * c + 4 {
            if cut.contains(&x) {
                continue;
            }
            let w = crossing_of(d.partner(x));
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Validates a candidate and returns the site it describes.
fn make_site(d: &Diagram, x: Dart, t_ne: Dart, t_se: Dart) -> Option<FlypeSite> {
    let c = crossing_of(x);
    let c_ne = next_ccw(x);
    let t_nw = d.partner(c_ne);
    let t_sw = d.partner(x);
    let inside = [t_nw, t_sw, t_ne, t_se];
    if inside.iter().any(|&y| crossing_of(y) == c) {
        return None;
    }
    let distinct: BTreeSet<Dart> = inside.iter().copied().collect();
    if distinct.len() != 4 {
        return None;
    }
    let cut: Vec<Dart> = inside.iter().flat_map(|&y| [y, d.partner(y)]).collect();
    let seen = region(d, crossing_of(t_nw), &cut);
    if seen[c] || inside.iter().any(|&y| !seen[crossing_of(y)] || seen[crossing_of(d.partner(y))]) {
        return None;
    }
    // the crossing meets the tangle along exactly two strands
    let c_nw = next_ccw(c_ne);
    if [c_nw, next_ccw(c_nw)].iter().any(|&y| seen[crossing_of(d.partner(y))]) {
        return None;
    }
    // exactly four edges leave the tangle
    let boundary = seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .flat_map(|(t, _)| 4 * t..4 * t + 4)
        .filter(|&y| !seen[crossing_of(d.partner(y))])
        .count();
    if boundary != 4 {
        return None;
    }
    let side = seen.iter().enumerate().filter(|(_, &s)| s).map(|(t, _)| t).collect();
    let cut = inside.map(|y| CutEdge { inside: y, outside: d.partner(y) });
    Some(FlypeSite { crossing: c, cut, side })
}

/// Every flype site of `d`, trivial ones included. Candidate cuts follow the
/// flype circle through the faces north and south of the crossing and the
/// face east of the tangle.
pub fn all_sites(d: &Diagram) -> Vec<FlypeSite> {
    if d.is_unknot() {
        return Vec::new();
    }
    let faces = d.faces();
    let mut sites = BTreeSet::new();
    for x in 0..d.dart_count() {
        let c = crossing_of(x);
        let c_ne = next_ccw(x);
        if crossing_of(d.partner(x)) == c || crossing_of(d.partner(c_ne)) == c {
            continue;
        }
        let f_north = faces.face_of[c_ne];
        let f_south = faces.face_of[prev_ccw(x)];
        for &t_ne in &faces.boundary[f_north] {
            if t_ne == c_ne {
                continue;
            }
            let f_east = faces.face_of[d.partner(t_ne)];
            for &t_se in &faces.boundary[f_east] {
                if faces.face_of[d.partner(t_se)] != f_south || t_se == t_ne {
                    continue;
                }
                if let Some(s) = make_site(d, x, t_ne, t_se) {
                    sites.insert(s);
                }
            }
        }
    }
    sites.into_iter().collect()
}

/// Sites whose flype changes the diagram up to orientation-preserving
/// sphere isomorphism.
pub fn find_flypes(d: &Diagram) -> Vec<FlypeSite> {
    let here = canonical_code(d, ReflectionPolicy::PRESERVING);
    all_sites(d)
        .into_iter()
        .filter(|s| {
            let out = apply_flype(d, s).expect("enumerated sites are valid");
            canonical_code(&out, ReflectionPolicy::PRESERVING) != here
        })
        .collect()
}

pub fn apply_flype(d: &Diagram, s: &FlypeSite) -> Result<Diagram, FlypeError> {
    let invalid = || FlypeError::InvalidSite(s.crossing);
    if s.crossing >= d.crossing_count() || crossing_of(s.c_se()) != s.crossing {
        return Err(invalid());
    }
    for e in &s.cut {
        if e.inside >= d.dart_count() || d.partner(e.inside) != e.outside {
            return Err(invalid());
        }
    }
    let c_se = s.c_se();
    let c_ne = next_ccw(c_se);
    let c_nw = next_ccw(c_ne);
    let c_sw = next_ccw(c_nw);
    if s.cut[0].outside != c_ne {
        return Err(invalid());
    }
    let expected = make_site(d, c_se, s.cut[2].inside, s.cut[3].inside).ok_or_else(invalid)?;
    if &expected != s {
        return Err(invalid());
    }
    let [t_nw, t_sw, t_ne, t_se] = s.cut.map(|e| e.inside);
    let old_ports = [c_nw, c_sw, t_ne, t_se];
    let new_ports = [t_sw, t_nw, c_ne, c_se];
    let mut link = d.links().to_vec();
    let mut connect = |a: Dart, b: Dart| {
        link[a] = b;
        link[b] = a;
    };
    connect(t_se, c_nw);
    connect(t_ne, c_sw);
    for i in 0..4 {
        let y = d.partner(old_ports[i]);
        match old_ports.iter().position(|&p| p == y) {
            Some(j) => connect(new_ports[i], new_ports[j]),
            None => connect(new_ports[i], y),
        }
    }
    let rewired = Diagram::from_parts_unchecked(link, d.markers().to_vec()).map_err(|_| invalid())?;
    let out = rewired.flipped(&s.side);
    out.validate().map_err(|_| invalid())?;
    if d.is_alternating() && !out.is_alternating() {
        return Err(invalid());
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitMember {
    pub diagram: Diagram,
    pub code: DiagramCode,
    /// Index of the member this one was first reached from.
    pub parent: Option<usize>,
    pub via: Option<FlypeSite>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub members: Vec<OrbitMember>,
    pub policy: ReflectionPolicy,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, code: &DiagramCode) -> Option<usize> {
        self.members.iter().position(|m| &m.code == code)
    }

    pub fn contains_diagram(&self, d: &Diagram) -> bool {
        self.position(&canonical_code(d, self.policy)).is_some()
    }

    /// Member indices from the root to `i`.
    pub fn path(&self, i: usize) -> Vec<usize> {
        let mut p = vec![i];
        let mut cur = i;
        while let Some(q) = self.members[cur].parent {
            p.push(q);
            cur = q;
        }
        p.reverse();
        p
    }

    pub fn diagrams(&self) -> impl Iterator<Item = &Diagram> {
        self.members.iter().map(|m| &m.diagram)
    }

    /// Members grouped by projection, in order of first discovery. Each
    /// group is one minimal diagram counted up to reflection of the sphere
    /// and mirror image.
    pub fn minimal_diagrams(&self) -> Vec<Vec<usize>> {
        let codes: Vec<DiagramCode> = self.members.par_iter().map(|m| projection_code(&m.diagram)).collect();
        let mut index: HashMap<&DiagramCode, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, c) in codes.iter().enumerate() {
            let g = *index.entry(c).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i);
        }
        groups
    }

    pub fn minimal_count(&self) -> usize {
        self.members.iter().map(|m| projection_code(&m.diagram)).collect::<BTreeSet<_>>().len()
    }

    /// Orbit dump: one entry per minimal diagram in discovery order, with
    /// the codes of all members showing it. `names` supplies Conway symbols
    /// for codes that are known.
    pub fn dump(&self, names: &HashMap<DiagramCode, String>) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .minimal_diagrams()
            .iter()
            .enumerate()
            .map(|(i, group)| {
                let rep = &self.members[group[0]];
                let pd = pd::to_pd(&rep.diagram);
                let conway = group.iter().find_map(|&m| names.get(&self.members[m].code));
                serde_json::json!({
                    "index": i + 1,
                    "code": rep.code.to_hex(),
                    "members": group.iter().map(|&m| self.members[m].code.to_hex()).collect::<Vec<_>>(),
                    "pd": pd::render_pd(&pd),
                    "conway": conway,
                    "path": self.path(group[0]).iter().map(|j| j + 1).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::Value::Array(entries)
    }
}

/// Breadth-first flype closure of `d` deduplicated under `policy`. Members are
/// numbered in discovery order, with successors of a member taken in site
/// order, so the result does not depend on the thread count.
pub fn orbit_with(d: &Diagram, max_size: usize, policy: ReflectionPolicy) -> Result<Orbit, OrbitError> {
    let root_code = canonical_code(d, policy);
    let mut orbit = Orbit {
        members: vec![OrbitMember { diagram: d.clone(), code: root_code.clone(), parent: None, via: None }],
        policy,
    };
    let mut seen: HashMap<DiagramCode, usize> = HashMap::from([(root_code, 0)]);
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    while !frontier.is_empty() {
        let level: Vec<usize> = frontier.drain(..).collect();
        let expanded: Vec<Vec<(FlypeSite, Diagram, DiagramCode)>> = level
            .par_iter()
            .map(|&i| {
                let m = &orbit.members[i].diagram;
                all_sites(m)
                    .into_iter()
                    .map(|s| {
                        let out = apply_flype(m, &s).expect("enumerated sites are valid");
                        let code = canonical_code(&out, policy);
                        (s, out, code)
                    })
                    .collect()
            })
            .collect();
        for (&parent, succ) in level.iter().zip(expanded) {
            for (site, diagram, code) in succ {
                if seen.contains_key(&code) {
                    continue;
                }
                if orbit.members.len() >= max_size {
                    return Err(OrbitError::Overflow { max_size, partial: orbit });
                }
                seen.insert(code.clone(), orbit.members.len());
                frontier.push_back(orbit.members.len());
                orbit.members.push(OrbitMember { diagram, code, parent: Some(parent), via: Some(site) });
            }
        }
    }
    Ok(orbit)
}

/// Code of the underlying projection: equal for diagrams related by sphere
/// homeomorphisms of either orientation, with or without mirroring.
pub fn projection_code(d: &Diagram) -> DiagramCode {
    let a = canonical_code(d, ReflectionPolicy::REFLECTING);
    let b = canonical_code(&d.mirror(), ReflectionPolicy::REFLECTING);
    a.min(b)
}

/// Flype orbit under orientation-preserving sphere equivalence.
pub fn orbit(d: &Diagram, max_size: usize) -> Result<Orbit, OrbitError> {
    orbit_with(d, max_size, ReflectionPolicy::PRESERVING)
}
