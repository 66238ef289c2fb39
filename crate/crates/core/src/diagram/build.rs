//! Assembly of diagrams from Conway tangle expressions.
//!
//! A tangle fragment is a disk with four boundary ports NE, NW, SW, SE (in
//! counterclockwise order). Integer `n` is a horizontal row of `n` crossings;
//! `a + b` glues the east side of `a` to the west side of `b`; `-a` is the
//! image of `a` in the NW-SE diagonal; `a b = -a + b` and
//! `(a, b, ...) = -a + -b + ...`. Links are numerator closures, or vertex
//! substitutions into a basic polyhedron.

use thiserror::Error;

use super::{Dart, Diagram, DiagramError};
use crate::conway::TangleExpr;
use crate::polyhedra::{self, BasicPolyhedron, NE, NW, SE, SW};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("negative integer tangle {0}: only alternating diagrams are built")]
    NegativeLeaf(i64),
    #[error("unknown basic polyhedron {0}")]
    UnknownPolyhedron(String),
    #[error("polyhedron {name} expects {expected} slots, got {found}")]
    SlotCount { name: String, expected: usize, found: usize },
    #[error("closure is not connected")]
    Disconnected,
    #[error("basic polyhedron {0} used as a tangle")]
    NestedPolyhedron(String),
    #[error("assembled diagram is not alternating")]
    NotAlternating,
    #[error(transparent)]
    Invalid(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Dart(Dart),
    Joint(usize),
}

#[derive(Default)]
struct Assembly {
    over_even: Vec<bool>,
    reversed: Vec<bool>,
    dart_conn: Vec<Option<Node>>,
    joint_conn: Vec<[Option<Node>; 2]>,
}

struct Fragment {
    /// NE, NW, SW, SE
    ports: [Node; 4],
    crossings: Vec<usize>,
}

impl Assembly {
    fn crossing(&mut self, over_even: bool) -> Fragment {
        let c = self.over_even.len();
        self.over_even.push(over_even);
        self.reversed.push(false);
        self.dart_conn.extend([None; 4]);
        Fragment {
            ports: [
                Node::Dart(4 * c),
                Node::Dart(4 * c + 1),
                Node::Dart(4 * c + 2),
                Node::Dart(4 * c + 3),
            ],
            crossings: vec![c],
        }
    }

    fn joint(&mut self) -> Node {
        self.joint_conn.push([None, None]);
        Node::Joint(self.joint_conn.len() - 1)
    }

    fn attach(&mut self, at: Node, to: Node) {
        match at {
            Node::Dart(d) => {
                debug_assert!(self.dart_conn[d].is_none());
                self.dart_conn[d] = Some(to);
            }
            Node::Joint(j) => {
                let slot = self.joint_conn[j].iter_mut().find(|s| s.is_none()).expect("joint full");
                *slot = Some(to);
            }
        }
    }

    fn connect(&mut self, a: Node, b: Node) {
        self.attach(a, b);
        self.attach(b, a);
    }

    /// Two parallel arcs: NW-NE and SW-SE.
    fn zero(&mut self) -> Fragment {
        let (nw, ne, sw, se) = (self.joint(), self.joint(), self.joint(), self.joint());
        self.connect(nw, ne);
        self.connect(sw, se);
        Fragment { ports: [ne, nw, sw, se], crossings: Vec::new() }
    }

    fn sum(&mut self, a: Fragment, b: Fragment) -> Fragment {
        self.connect(a.ports[NE], b.ports[NW]);
        self.connect(a.ports[SE], b.ports[SW]);
        let mut crossings = a.crossings;
        crossings.extend(b.crossings);
        Fragment { ports: [b.ports[NE], a.ports[NW], a.ports[SW], b.ports[SE]], crossings }
    }

    /// Image in the NW-SE diagonal; crossings keep their over strand.
    fn reflect(&mut self, f: Fragment) -> Fragment {
        for &c in &f.crossings {
            self.reversed[c] = !self.reversed[c];
        }
        let [ne, nw, sw, se] = f.ports;
        Fragment { ports: [sw, nw, ne, se], crossings: f.crossings }
    }

    /// Half turn about the east-west axis: north and south ports trade
    /// places and every crossing is seen from below.
    fn flip(&mut self, f: Fragment) -> Fragment {
        for &c in &f.crossings {
            self.reversed[c] = !self.reversed[c];
            self.over_even[c] = !self.over_even[c];
        }
        let [ne, nw, sw, se] = f.ports;
        Fragment { ports: [se, sw, nw, ne], crossings: f.crossings }
    }

    fn integer(&mut self, n: i64) -> Fragment {
        if n == 0 {
            return self.zero();
        }
        let over_even = n > 0;
        let mut acc = self.crossing(over_even);
        for _ in 1..n.unsigned_abs() {
            let next = self.crossing(over_even);
            acc = self.sum(acc, next);
        }
        acc
    }

    fn tangle(&mut self, e: &TangleExpr) -> Result<Fragment, BuildError> {
        Ok(match e {
            TangleExpr::Integer { value } => self.integer(*value),
            TangleExpr::Sum { left, right } => {
                let a = self.tangle(left)?;
                let b = self.tangle(right)?;
                self.sum(a, b)
            }
            TangleExpr::Product { left, right } => {
                let a = self.tangle(left)?;
                let a = self.reflect(a);
                let b = self.tangle(right)?;
                self.sum(a, b)
            }
            TangleExpr::Ramification { parts } => {
                let mut acc: Option<Fragment> = None;
                for p in parts {
                    let f = self.tangle(p)?;
                    let f = self.reflect(f);
                    acc = Some(match acc {
                        None => f,
                        Some(a) => self.sum(a, f),
                    });
                }
                acc.expect("ramification has parts")
            }
            TangleExpr::Polyhedron { name, .. } => {
                return Err(BuildError::NestedPolyhedron(name.clone()))
            }
        })
    }

    fn polyhedron(&mut self, poly: &BasicPolyhedron, slots: &[TangleExpr]) -> Result<(), BuildError> {
        if slots.len() != poly.vertex_count() {
            return Err(BuildError::SlotCount {
                name: poly.name.clone(),
                expected: poly.vertex_count(),
                found: slots.len(),
            });
        }
        let mut frags = Vec::with_capacity(slots.len());
        for (v, s) in slots.iter().enumerate() {
            let mut f = self.tangle(s)?;
            if poly.is_transposed(v) {
                f = self.reflect(f);
            }
            if poly.is_flipped(v) {
                f = self.flip(f);
            }
            frags.push(f);
        }
        for v in 0..poly.vertex_count() {
            for p in [NE, NW, SW, SE] {
                let (w, q) = poly.partner(v, p);
                if (v, p) < (w, q) {
                    self.connect(frags[v].ports[p], frags[w].ports[q]);
                }
            }
        }
        Ok(())
    }

    /// Resolves joints into a dart pairing and lays out each crossing's
    /// slots in counterclockwise order.
    fn finish(self) -> Result<Diagram, BuildError> {
        let n = self.over_even.len();
        let mut joint_seen = vec![false; self.joint_conn.len()];
        let mut raw_link = vec![usize::MAX; 4 * n];
        for d in 0..4 * n {
            let mut prev = Node::Dart(d);
            let mut cur = self.dart_conn[d].expect("every port is connected");
            loop {
                match cur {
                    Node::Dart(e) => {
                        raw_link[d] = e;
                        break;
                    }
                    Node::Joint(j) => {
                        joint_seen[j] = true;
                        let [a, b] = self.joint_conn[j];
                        let (a, b) = (a.expect("joint connected"), b.expect("joint connected"));
                        let next = if a == prev { b } else { a };
                        prev = cur;
                        cur = next;
                    }
                }
            }
        }
        let free_loops = joint_seen.iter().any(|s| !s);
        if n == 0 {
            // joints only: count closed loops
            let loops = count_joint_loops(&self.joint_conn);
            return if loops == 1 { Ok(Diagram::unknot()) } else { Err(BuildError::Disconnected) };
        }
        if free_loops {
            return Err(BuildError::Disconnected);
        }
        // reversed crossings list their slots clockwise in assembly order
        let slot_map = |d: Dart| -> Dart {
            let c = d / 4;
            if self.reversed[c] && d % 2 == 1 {
                d ^ 2
            } else {
                d
            }
        };
        let mut link = vec![0; 4 * n];
        for d in 0..4 * n {
            link[slot_map(d)] = slot_map(raw_link[d]);
        }
        let diagram = Diagram::from_parts_unchecked(link, self.over_even)?;
        if !diagram.is_connected() {
            return Err(BuildError::Disconnected);
        }
        diagram.validate()?;
        Ok(diagram)
    }
}

fn count_joint_loops(conn: &[[Option<Node>; 2]]) -> usize {
    let mut seen = vec![false; conn.len()];
    let mut loops = 0;
    for start in 0..conn.len() {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(j) = stack.pop() {
            for n in conn[j].iter().flatten() {
                if let Node::Joint(k) = *n {
                    if !seen[k] {
                        seen[k] = true;
                        stack.push(k);
                    }
                }
            }
        }
    }
    loops
}

/// Builds the diagram of any expression, negative leaves included. The
/// result need not be alternating or reduced.
pub fn assemble(expr: &TangleExpr) -> Result<Diagram, BuildError> {
    let mut asm = Assembly::default();
    match expr {
        TangleExpr::Polyhedron { name, slots } => {
            let poly = polyhedra::lookup(name).ok_or_else(|| BuildError::UnknownPolyhedron(name.clone()))?;
            asm.polyhedron(poly, slots)?
        }
        e => {
            let f = asm.tangle(e)?;
            asm.connect(f.ports[NW], f.ports[NE]);
            asm.connect(f.ports[SW], f.ports[SE]);
        }
    }
    asm.finish()
}

/// Substitutes `slots` into the vertices of an explicit template.
pub fn assemble_on(poly: &BasicPolyhedron, slots: &[TangleExpr]) -> Result<Diagram, BuildError> {
    let mut asm = Assembly::default();
    asm.polyhedron(poly, slots)?;
    asm.finish()
}

/// Builds the alternating diagram of an expression with nonnegative leaves.
pub fn build(expr: &TangleExpr) -> Result<Diagram, BuildError> {
    if let Some(v) = negative_leaf(expr) {
        return Err(BuildError::NegativeLeaf(v));
    }
    let d = assemble(expr)?;
    if !d.is_alternating() {
        return Err(BuildError::NotAlternating);
    }
    Ok(d)
}

fn negative_leaf(e: &TangleExpr) -> Option<i64> {
    match e {
        TangleExpr::Integer { value } => (*value < 0).then_some(*value),
        TangleExpr::Sum { left, right } | TangleExpr::Product { left, right } => {
            negative_leaf(left).or_else(|| negative_leaf(right))
        }
        TangleExpr::Ramification { parts } | TangleExpr::Polyhedron { slots: parts, .. } => {
            parts.iter().find_map(negative_leaf)
        }
    }
}
