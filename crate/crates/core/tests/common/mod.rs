//! Random instances shared by the property suites.
#![allow(dead_code)]

use altlink::checkerboard::{reconstruct, PlaneGraph, Sign};
use altlink::conway::TangleExpr;
use altlink::diagram::{build, Diagram};
use proptest::prelude::*;

/// One growth step of a plane map: a pendant edge in the corner after a
/// dart, or an edge across a face between two of its corners.
#[derive(Debug, Clone, Copy)]
pub enum Step {
    Pendant { at: usize },
    Chord { at: usize, ahead: usize },
}

fn twin(d: usize) -> usize {
    d ^ 1
}

/// Grows a connected plane multigraph. Darts `2e` and `2e + 1` are the two
/// ends of edge `e`; faces are the orbits of `d -> succ(twin(d))`.
pub fn grow(steps: &[Step], signs: u64) -> PlaneGraph {
    let mut rot: Vec<Vec<usize>> = vec![Vec::new()];
    let mut edges = 0;
    for &step in steps {
        let darts = 2 * edges;
        let (v_of, pos) = index(&rot, darts);
        let corner = |d: usize| (v_of[twin(d)], pos[twin(d)] + 1);
        let (a, b) = (2 * edges, 2 * edges + 1);
        match step {
            Step::Chord { at, ahead } if darts > 0 => {
                let start = at % darts;
                let mut other = start;
                for _ in 0..ahead % 8 {
                    let t = twin(other);
                    let r = &rot[v_of[t]];
                    other = r[(pos[t] + 1) % r.len()];
                }
                let (v1, p1) = corner(start);
                let (v2, _) = corner(other);
                rot[v1].insert(p1, a);
                // the first insertion may shift the second corner
                let t = twin(other);
                let p2 = rot[v2].iter().position(|&x| x == t).unwrap() + 1;
                rot[v2].insert(p2, b);
            }
            Step::Pendant { at } | Step::Chord { at, .. } => {
                if darts == 0 {
                    rot[0].push(a);
                } else {
                    let (v, p) = corner(at % darts);
                    rot[v].insert(p, a);
                }
                rot.push(vec![b]);
            }
        }
        edges += 1;
    }
    let s = (0..edges).map(|e| if signs >> (e % 64) & 1 == 1 { Sign::Plus } else { Sign::Minus }).collect();
    PlaneGraph::new(rot, Some(s)).expect("growth keeps the map spherical")
}

fn index(rot: &[Vec<usize>], darts: usize) -> (Vec<usize>, Vec<usize>) {
    let mut v_of = vec![0; darts];
    let mut pos = vec![0; darts];
    for (v, r) in rot.iter().enumerate() {
        for (i, &d) in r.iter().enumerate() {
            v_of[d] = v;
            pos[d] = i;
        }
    }
    (v_of, pos)
}

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        1 => any::<usize>().prop_map(|at| Step::Pendant { at }),
        5 => (any::<usize>(), 1usize..8).prop_map(|(at, ahead)| Step::Chord { at, ahead }),
    ]
}

/// Signed connected plane multigraphs with `1..=max_edges` edges.
pub fn plane_graph(max_edges: usize) -> impl Strategy<Value = PlaneGraph> {
    (prop::collection::vec(step(), 1..=max_edges), any::<u64>()).prop_map(|(s, signs)| grow(&s, signs))
}

/// Connected diagrams, not necessarily alternating or reduced, as medial
/// diagrams of random signed plane graphs.
pub fn diagram(max_crossings: usize) -> impl Strategy<Value = Diagram> {
    plane_graph(max_crossings).prop_map(|g| reconstruct(&g).expect("signed graph"))
}

/// Alternating diagrams: every edge of the graph carries the same sign.
pub fn alternating_diagram(max_crossings: usize) -> impl Strategy<Value = Diagram> {
    prop::collection::vec(step(), 1..=max_crossings)
        .prop_map(|s| reconstruct(&grow(&s, u64::MAX)).expect("signed graph"))
}

/// Conway expressions with leaves drawn from `leaves`.
pub fn expr(leaves: std::ops::Range<i64>, depth: u32) -> impl Strategy<Value = TangleExpr> {
    leaves.prop_map(TangleExpr::int).prop_recursive(depth, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TangleExpr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TangleExpr::product(a, b)),
            prop::collection::vec(inner, 2..4).prop_map(TangleExpr::ramification),
        ]
    })
}

/// Diagrams built from positive Conway expressions; closures that fall
/// apart are dropped.
pub fn built_diagram() -> impl Strategy<Value = Diagram> {
    expr(1..4, 3).prop_filter_map("closure splits", |e| build(&e).ok())
}

/// Reduced prime alternating diagrams with at least three crossings, from
/// Conway expressions and from random plane graphs.
pub fn prime_alternating(max_crossings: usize) -> impl Strategy<Value = Diagram> {
    prop_oneof![
        expr(1..4, 4).prop_filter_map("closure splits", |e| build(&e).ok()),
        alternating_diagram(max_crossings),
    ]
    .prop_map(|d| d.reduce())
    .prop_filter("small, composite or split", move |d| {
        (3..=max_crossings).contains(&d.crossing_count()) && d.is_prime()
    })
}
