//! Isomorphism of plane multigraphs, as abstract graphs or as embedded maps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PlaneGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum IsoMode {
    /// Multigraph isomorphism, ignoring the embedding.
    Abstract,
    /// Isomorphism of maps on the oriented sphere.
    #[default]
    Embedded,
    /// Isomorphism of maps allowing a reflection of the sphere.
    EmbeddedReflecting,
}

impl std::str::FromStr for IsoMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "abstract" => Ok(IsoMode::Abstract),
            "embedded" => Ok(IsoMode::Embedded),
            "embedded-reflecting" | "embedded+reflection" => Ok(IsoMode::EmbeddedReflecting),
            _ => Err(format!("unknown iso mode {s:?}")),
        }
    }
}

impl std::fmt::Display for IsoMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IsoMode::Abstract => "abstract",
            IsoMode::Embedded => "embedded",
            IsoMode::EmbeddedReflecting => "embedded-reflecting",
        })
    }
}

/// Vertex and edge correspondence from the first graph to the second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphIso {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub reflected: bool,
}

pub fn isomorphism(g: &PlaneGraph, h: &PlaneGraph, mode: IsoMode) -> Option<GraphIso> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    match mode {
        IsoMode::Abstract => abstract_iso(g, h),
        IsoMode::Embedded => embedded_iso(g, h, false),
        IsoMode::EmbeddedReflecting => embedded_iso(g, h, true),
    }
}

pub fn is_isomorphic(g: &PlaneGraph, h: &PlaneGraph, mode: IsoMode) -> bool {
    isomorphism(g, h, mode).is_some()
}

fn traverse(g: &PlaneGraph, root: usize, reflect: bool) -> (Vec<u32>, Vec<usize>) {
    let step = |x: usize| if reflect { g.prev_ccw(x) } else { g.next_ccw(x) };
    let mut label = vec![u32::MAX; g.vertex_count()];
    let mut base = vec![root];
    label[g.vertex_of(root)] = 0;
    let mut words = vec![g.vertex_count() as u32];
    let mut head = 0;
    while head < base.len() {
        let b = base[head];
        head += 1;
        let deg = g.rotation()[g.vertex_of(b)].len();
        words.push(deg as u32);
        let mut x = b;
        for _ in 0..deg {
            let y = PlaneGraph::twin(x);
            let w = g.vertex_of(y);
            if label[w] == u32::MAX {
                label[w] = base.len() as u32;
                base.push(y);
            }
            let mut pos = 0;
            let mut z = base[label[w] as usize];
            while z != y {
                z = step(z);
                pos += 1;
            }
            words.push(label[w]);
            words.push(pos);
            x = step(x);
        }
    }
    (words, base)
}

/// Least traversal code over all root darts; equal codes mean isomorphic
/// maps.
pub fn embedded_code(g: &PlaneGraph, allow_reflection: bool) -> Vec<u32> {
    if g.edge_count() == 0 {
        return vec![g.vertex_count() as u32];
    }
    let flags: &[bool] = if allow_reflection { &[false, true] } else { &[false] };
    flags
        .iter()
        .flat_map(|&r| (0..2 * g.edge_count()).map(move |root| traverse(g, root, r).0))
        .min()
        .unwrap()
}

fn embedded_iso(g: &PlaneGraph, h: &PlaneGraph, allow_reflection: bool) -> Option<GraphIso> {
    if g.edge_count() == 0 {
        return Some(GraphIso { vertex_map: vec![0; g.vertex_count()], edge_map: Vec::new(), reflected: false });
    }
    let (wg, base_g) = traverse(g, 0, false);
    let flags: &[bool] = if allow_reflection { &[false, true] } else { &[false] };
    for &reflect in flags {
        for root in 0..2 * h.edge_count() {
            let (wh, base_h) = traverse(h, root, reflect);
            if wg != wh {
                continue;
            }
            let mut vertex_map = vec![0; g.vertex_count()];
            let mut edge_map = vec![0; g.edge_count()];
            for (&x0, &y0) in base_g.iter().zip(&base_h) {
                vertex_map[g.vertex_of(x0)] = h.vertex_of(y0);
                let (mut x, mut y) = (x0, y0);
                for _ in 0..g.rotation()[g.vertex_of(x0)].len() {
                    edge_map[x / 2] = y / 2;
                    x = g.next_ccw(x);
                    y = if reflect { h.prev_ccw(y) } else { h.next_ccw(y) };
                }
            }
            return Some(GraphIso { vertex_map, edge_map, reflected: reflect });
        }
    }
    None
}

/// Per-vertex invariant: degree, loop count, sorted multiplicities to
/// other vertices.
fn vertex_invariants(m: &[Vec<usize>]) -> Vec<(usize, usize, Vec<usize>)> {
    (0..m.len())
        .map(|v| {
            let loops = m[v][v];
            let mut mult: Vec<usize> =
                (0..m.len()).filter(|&w| w != v && m[v][w] > 0).map(|w| m[v][w]).collect();
            mult.sort_unstable();
            let deg = 2 * loops + mult.iter().sum::<usize>();
            (deg, loops, mult)
        })
        .collect()
}

/// Sorted per-vertex invariants; equal for abstractly isomorphic graphs.
pub fn abstract_signature(g: &PlaneGraph) -> Vec<(usize, usize, Vec<usize>)> {
    let mut inv = vertex_invariants(&g.multiplicities());
    inv.sort();
    inv
}

fn abstract_iso(g: &PlaneGraph, h: &PlaneGraph) -> Option<GraphIso> {
    let mg = g.multiplicities();
    let mh = h.multiplicities();
    let ig = vertex_invariants(&mg);
    let ih = vertex_invariants(&mh);
    let mut sg = ig.clone();
    let mut sh = ih.clone();
    sg.sort();
    sh.sort();
    if sg != sh {
        return None;
    }
    let n = g.vertex_count();
    // most constrained first: rarest invariant, then highest degree
    let mut counts: BTreeMap<&(usize, usize, Vec<usize>), usize> = BTreeMap::new();
    for inv in &ig {
        *counts.entry(inv).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (counts[&ig[v]], std::cmp::Reverse(ig[v].0), v));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !extend(0, &order, &mg, &mh, &ig, &ih, &mut map, &mut used) {
        return None;
    }
    // pair edges between corresponding vertex pairs in index order
    let mut pools: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in 0..h.edge_count() {
        let (a, b) = h.endpoints(e);
        pools.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    for pool in pools.values_mut() {
        pool.reverse();
    }
    let mut edge_map = vec![0; g.edge_count()];
    for (e, slot) in edge_map.iter_mut().enumerate() {
        let (u, v) = g.endpoints(e);
        let (a, b) = (map[u], map[v]);
        *slot = pools.get_mut(&(a.min(b), a.max(b)))?.pop()?;
    }
    Some(GraphIso { vertex_map: map, edge_map, reflected: false })
}

#[allow(clippy::too_many_arguments)]
fn extend(
    i: usize,
    order: &[usize],
    mg: &[Vec<usize>],
    mh: &[Vec<usize>],
    ig: &[(usize, usize, Vec<usize>)],
    ih: &[(usize, usize, Vec<usize>)],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    for w in 0..mh.len() {
        if used[w] || ig[v] != ih[w] {
            continue;
        }
        let consistent = order[..i].iter().all(|&u| mg[v][u] == mh[w][map[u]]);
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(i + 1, order, mg, mh, ig, ih, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}
