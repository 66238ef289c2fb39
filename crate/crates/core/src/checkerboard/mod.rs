//! Checkerboard graphs of link diagrams, planar duals, and the medial
//! reconstruction of a diagram from a signed graph.

mod iso;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Faces};

pub use iso::{abstract_signature, embedded_code, is_isomorphic, isomorphism, GraphIso, IsoMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Two-colouring of the faces of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shading {
    pub faces: Faces,
    pub shaded: Vec<bool>,
    pub outer: usize,
}

/// Shades the class of faces holding the A-corners of crossing 0 (for an
/// alternating diagram: the A-corners of every crossing) and designates the
/// lowest-numbered unshaded face as the outer face.
pub fn shade(d: &Diagram) -> Shading {
    if d.is_unknot() {
        // face 0 outside the circle, face 1 inside
        let faces = Faces { face_of: Vec::new(), boundary: vec![Vec::new(), Vec::new()] };
        return Shading { faces, shaded: vec![false, true], outer: 0 };
    }
    let faces = d.faces();
    let mut color: Vec<Option<bool>> = vec![None; faces.count()];
    let a_corner = if d.over_even(0) { 0 } else { 1 };
    color[faces.face_of[a_corner]] = Some(true);
    // adjacent corners around a crossing alternate colours
    let mut stack = vec![faces.face_of[a_corner]];
    while let Some(f) = stack.pop() {
        let c = color[f].unwrap();
        for &x in &faces.boundary[f] {
            for y in [crate::diagram::next_ccw(x), crate::diagram::prev_ccw(x)] {
                let g = faces.face_of[y];
                match color[g] {
                    None => {
                        color[g] = Some(!c);
                        stack.push(g);
                    }
                    Some(cg) => debug_assert_ne!(cg, c, "faces are not two-colourable"),
                }
            }
        }
    }
    let shaded: Vec<bool> = color.into_iter().map(|c| c.expect("connected diagram")).collect();
    let outer = shaded.iter().position(|s| !s).expect("an unshaded face exists");
    Shading { faces, shaded, outer }
}

/// A connected multigraph embedded in the sphere by a rotation system.
/// Edge `e` has darts `2e` and `2e + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneGraph {
    rotation: Vec<Vec<usize>>,
    vertex_of: Vec<usize>,
    position: Vec<usize>,
    signs: Option<Vec<Sign>>,
    outer_face: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0} has no sign")]
    MissingSign(usize),
    #[error("rotation system does not list every dart exactly once")]
    BadRotation,
    #[error("graph is not connected or not planar (Euler characteristic {0})")]
    NotSpherical(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFaces {
    pub face_of: Vec<usize>,
    pub boundary: Vec<Vec<usize>>,
}

impl PlaneGraph {
    pub fn new(rotation: Vec<Vec<usize>>, signs: Option<Vec<Sign>>) -> Result<Self, GraphError> {
        let darts: usize = rotation.iter().map(Vec::len).sum();
        if darts % 2 != 0 {
            return Err(GraphError::BadRotation);
        }
        let mut vertex_of = vec![usize::MAX; darts];
        let mut position = vec![0; darts];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= darts || vertex_of[d] != usize::MAX {
                    return Err(GraphError::BadRotation);
                }
                vertex_of[d] = v;
                position[d] = i;
            }
        }
        if let Some(s) = &signs {
            if s.len() != darts / 2 {
                return Err(GraphError::MissingSign(s.len().min(darts / 2)));
            }
        }
        let g = PlaneGraph { rotation, vertex_of, position, signs, outer_face: None };
        let chi = g.euler_characteristic();
        if chi != 2 || !g.is_connected() {
            return Err(GraphError::NotSpherical(chi));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_of.len() / 2
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.vertex_of[d]
    }

    pub fn signs(&self) -> Option<&[Sign]> {
        self.signs.as_deref()
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer_face
    }

    pub fn unsigned(&self) -> PlaneGraph {
        PlaneGraph { signs: None, ..self.clone() }
    }

    #[inline]
    pub fn twin(d: usize) -> usize {
        d ^ 1
    }

    pub fn next_ccw(&self, d: usize) -> usize {
        let rot = &self.rotation[self.vertex_of[d]];
        rot[(self.position[d] + 1) % rot.len()]
    }

    pub fn prev_ccw(&self, d: usize) -> usize {
        let rot = &self.rotation[self.vertex_of[d]];
        rot[(self.position[d] + rot.len() - 1) % rot.len()]
    }

    /// Endpoints of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.vertex_of[2 * e], self.vertex_of[2 * e + 1])
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.endpoints(e);
        u == v
    }

    /// Faces traced with the face on the left; `face_of[d]` is the face
    /// counterclockwise of dart `d` at its vertex.
    pub fn faces(&self) -> GraphFaces {
        let n = self.vertex_of.len();
        if n == 0 {
            return GraphFaces { face_of: Vec::new(), boundary: vec![Vec::new()] };
        }
        let mut face_of = vec![usize::MAX; n];
        let mut boundary = Vec::new();
        for start in 0..n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = boundary.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = f;
                walk.push(d);
                d = self.prev_ccw(Self::twin(d));
                if d == start {
                    break;
                }
            }
            boundary.push(walk);
        }
        GraphFaces { face_of, boundary }
    }

    pub fn face_count(&self) -> usize {
        self.faces().boundary.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.rotation[v] {
                let w = self.vertex_of[Self::twin(d)];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Edge multiplicity matrix; a loop adds one to its diagonal entry.
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for e in 0..self.edge_count() {
            let (u, v) = self.endpoints(e);
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{name}\" {{");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  v{v};");
        }
        for e in 0..self.edge_count() {
            let (u, v) = self.endpoints(e);
            match self.signs.as_ref().map(|s| s[e]) {
                Some(sign) => {
                    let label = if sign == Sign::Plus { "+" } else { "-" };
                    let _ = writeln!(s, "  v{u} -- v{v} [key={e}, sign=\"{label}\", label=\"{label}\"];");
                }
                None => {
                    let _ = writeln!(s, "  v{u} -- v{v} [key={e}];");
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// Adjacency with rotation: per vertex, the ccw list of
    /// `{edge, neighbor}` plus edge signs and the outer face.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .rotation
            .iter()
            .map(|rot| {
                serde_json::Value::Array(
                    rot.iter()
                        .map(|&d| {
                            serde_json::json!({
                                "edge": d / 2,
                                "neighbor": self.vertex_of[Self::twin(d)],
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "vertices": self.vertex_count(),
            "edges": self.edge_count(),
            "rotation": vertices,
            "signs": self.signs,
            "outer_face": self.outer_face,
        })
    }
}

fn sign_of(d: &Diagram, c: usize, shaded_parity: usize) -> Sign {
    // the A-corners of c sit at the slots of its over darts
    let a_parity = if d.over_even(c) { 0 } else { 1 };
    if a_parity == shaded_parity {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Graph on the faces of one colour class: one vertex per face, one edge per
/// crossing joining the two faces of that class at its corners.
fn region_graph(d: &Diagram, sh: &Shading, use_shaded: bool, signed: bool) -> PlaneGraph {
    if d.is_unknot() {
        return PlaneGraph {
            rotation: vec![Vec::new()],
            vertex_of: Vec::new(),
            position: Vec::new(),
            signs: signed.then(Vec::new),
            outer_face: Some(0),
        };
    }
    let faces = &sh.faces;
    let mut vertex = vec![usize::MAX; faces.count()];
    let mut next = 0;
    for f in 0..faces.count() {
        if sh.shaded[f] == use_shaded {
            vertex[f] = next;
            next += 1;
        }
    }
    let n = d.crossing_count();
    // corner parity of this colour at each crossing
    let parity: Vec<usize> = (0..n)
        .map(|c| if sh.shaded[faces.face_of[4 * c]] == use_shaded { 0 } else { 1 })
        .collect();
    let mut rotation = vec![Vec::new(); next];
    for f in 0..faces.count() {
        if vertex[f] == usize::MAX {
            continue;
        }
        for &x in &faces.boundary[f] {
            let c = x / 4;
            let g_dart = if x % 4 == parity[c] { 2 * c } else { 2 * c + 1 };
            rotation[vertex[f]].push(g_dart);
        }
    }
    let signs = signed.then(|| (0..n).map(|c| sign_of(d, c, parity[c])).collect());
    let mut g = PlaneGraph::new(rotation, signs).expect("checkerboard graph is spherical");
    g.outer_face = region_face(d, sh, &parity, &g, sh.outer);
    g
}

/// The face of `g` corresponding to diagram face `target` of the other
/// colour class.
fn region_face(
    d: &Diagram,
    sh: &Shading,
    parity: &[usize],
    g: &PlaneGraph,
    target: usize,
) -> Option<usize> {
    let gf = g.faces();
    (0..2 * d.crossing_count()).find_map(|x| {
        let c = x / 2;
        let p = parity[c];
        // region counterclockwise of the graph dart at its vertex
        let slot = if x % 2 == 0 { (p + 3) % 4 } else { (p + 1) % 4 };
        (sh.faces.face_of[4 * c + slot] == target).then(|| gf.face_of[x])
    })
}

/// Checkerboard graph G(D) on the shaded faces.
pub fn graph_of(d: &Diagram, signed: bool) -> PlaneGraph {
    region_graph(d, &shade(d), true, signed)
}

/// The same construction on the unshaded faces, G*(D).
pub fn unshaded_graph_of(d: &Diagram, signed: bool) -> PlaneGraph {
    region_graph(d, &shade(d), false, signed)
}

/// Planar dual: one vertex per face, rotation induced by the face walks.
/// Signs are flipped.
pub fn dual(g: &PlaneGraph) -> PlaneGraph {
    if g.edge_count() == 0 {
        return g.clone();
    }
    let gf = g.faces();
    let rotation = gf.boundary.clone();
    let signs = g.signs.as_ref().map(|s| s.iter().map(|x| x.flip()).collect());
    PlaneGraph::new(rotation, signs).expect("dual of a spherical graph is spherical")
}

/// Medial construction: one crossing per edge, its over strand chosen so the
/// A-corners face the graph's vertices exactly when the edge sign is `+`.
pub fn reconstruct(g: &PlaneGraph) -> Result<Diagram, GraphError> {
    let signs = g.signs.as_ref().ok_or(GraphError::MissingSign(0))?;
    let m = g.edge_count();
    if m == 0 {
        return Ok(Diagram::unknot());
    }
    // slot facing the angle after / before a graph dart (NE=0 NW=1 SW=2 SE=3)
    let slot_next = |x: usize| if x % 2 == 0 { 1 } else { 3 };
    let slot_prev = |x: usize| if x % 2 == 0 { 2 } else { 0 };
    let mut link = vec![usize::MAX; 4 * m];
    for a in 0..2 * m {
        let b = g.next_ccw(a);
        let da = 4 * (a / 2) + slot_next(a);
        let db = 4 * (b / 2) + slot_prev(b);
        link[da] = db;
        link[db] = da;
    }
    let over_even = signs.iter().map(|&s| s == Sign::Minus).collect();
    Diagram::from_parts(link, over_even).map_err(|_| GraphError::NotSpherical(0))
}
