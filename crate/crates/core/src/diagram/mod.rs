//! Link diagrams as 4-valent combinatorial maps on the sphere.
//!
//! Crossing `c` owns darts `4c..4c+4` in counterclockwise order. `link` is
//! the fixed-point-free involution pairing darts into edges. Darts `4c` and
//! `4c+2` always lie on one strand through `c`, `4c+1` and `4c+3` on the
//! other; `over_even[c]` says whether the even pair passes over.

mod build;
mod code;
pub mod pd;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{assemble, assemble_on, build, BuildError};
pub use code::{canonical_code, sphere_iso, DiagramCode, ReflectionPolicy, SphereIso};

pub type Dart = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("dart pairing is not a fixed-point-free involution at dart {0}")]
    BadInvolution(Dart),
    #[error("marker count {markers} does not match {crossings} crossings")]
    MarkerCount { markers: usize, crossings: usize },
    #[error("diagram is not connected")]
    Disconnected,
    #[error("map is not planar: Euler characteristic {0}")]
    NotSpherical(i64),
}

#[inline]
pub fn crossing_of(d: Dart) -> usize {
    d >> 2
}

#[inline]
pub fn slot_of(d: Dart) -> usize {
    d & 3
}

/// Counterclockwise successor at the same crossing.
#[inline]
pub fn next_ccw(d: Dart) -> Dart {
    (d & !3) | ((d + 1) & 3)
}

#[inline]
pub fn prev_ccw(d: Dart) -> Dart {
    (d & !3) | ((d + 3) & 3)
}

/// The dart across the crossing on the same strand.
#[inline]
pub fn opposite(d: Dart) -> Dart {
    d ^ 2
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    link: Vec<Dart>,
    over_even: Vec<bool>,
}

/// Faces of a diagram. `face_of[d]` is the face lying counterclockwise of
/// dart `d`, i.e. the face containing the corner between `d` and
/// `next_ccw(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Faces {
    pub face_of: Vec<usize>,
    pub boundary: Vec<Vec<Dart>>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.boundary.len()
    }
}

impl Diagram {
    /// The crossingless unknot.
    pub fn unknot() -> Self {
        Diagram { link: Vec::new(), over_even: Vec::new() }
    }

    pub fn from_parts(link: Vec<Dart>, over_even: Vec<bool>) -> Result<Self, DiagramError> {
        let d = Diagram::from_parts_unchecked(link, over_even)?;
        d.validate()?;
        Ok(d)
    }

    /// Checks only the involution and marker count.
    pub(crate) fn from_parts_unchecked(
        link: Vec<Dart>,
        over_even: Vec<bool>,
    ) -> Result<Self, DiagramError> {
        if link.len() != 4 * over_even.len() {
            return Err(DiagramError::MarkerCount {
                markers: over_even.len(),
                crossings: link.len() / 4,
            });
        }
        for (d, &e) in link.iter().enumerate() {
            if e >= link.len() || e == d || link[e] != d {
                return Err(DiagramError::BadInvolution(d));
            }
        }
        Ok(Diagram { link, over_even })
    }

    pub(crate) fn validate(&self) -> Result<(), DiagramError> {
        if !self.is_connected() {
            return Err(DiagramError::Disconnected);
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            return Err(DiagramError::NotSpherical(chi));
        }
        Ok(())
    }

    pub fn crossing_count(&self) -> usize {
        self.over_even.len()
    }

    pub fn dart_count(&self) -> usize {
        self.link.len()
    }

    pub fn is_unknot(&self) -> bool {
        self.over_even.is_empty()
    }

    #[inline]
    pub fn partner(&self, d: Dart) -> Dart {
        self.link[d]
    }

    pub fn links(&self) -> &[Dart] {
        &self.link
    }

    pub fn over_even(&self, c: usize) -> bool {
        self.over_even[c]
    }

    pub fn markers(&self) -> &[bool] {
        &self.over_even
    }

    #[inline]
    pub fn is_over(&self, d: Dart) -> bool {
        self.over_even[crossing_of(d)] == (slot_of(d) % 2 == 0)
    }

    /// Next dart of the face walk keeping the face on the left.
    #[inline]
    pub fn face_step(&self, d: Dart) -> Dart {
        prev_ccw(self.link[d])
    }

    pub fn faces(&self) -> Faces {
        let n = self.link.len();
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
                d = self.face_step(d);
                if d == start {
                    break;
                }
            }
            boundary.push(walk);
        }
        Faces { face_of, boundary }
    }

    pub fn face_count(&self) -> usize {
        if self.is_unknot() {
            2
        } else {
            self.faces().count()
        }
    }

    /// V - E + F of the underlying 4-valent map.
    pub fn euler_characteristic(&self) -> i64 {
        if self.is_unknot() {
            return 2;
        }
        let v = self.crossing_count() as i64;
        let e = (self.link.len() / 2) as i64;
        v - e + self.faces().count() as i64
    }

    pub fn is_connected(&self) -> bool {
        let n = self.crossing_count();
        if n == 0 {
            return true;
        }
        self.reachable_from(&[0], None).iter().all(|&r| r)
    }

    /// Crossings reachable from `starts` along edges without entering `blocked`.
    pub(crate) fn reachable_from(&self, starts: &[usize], blocked: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.crossing_count()];
        let mut queue = VecDeque::new();
        for &s in starts {
            if Some(s) != blocked && !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(c) = queue.pop_front() {
            for d in 4 * c..4 * c + 4 {
                let w = crossing_of(self.link[d]);
                if Some(w) != blocked && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Strands of the link; each is the cyclic list of darts by which the
    /// strand leaves successive crossings. The first strand starts at dart 0,
    /// later ones at their lowest unvisited dart.
    pub fn components(&self) -> Vec<Vec<Dart>> {
        let n = self.link.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut d = start;
            loop {
                seen[d] = true;
                comp.push(d);
                let arrive = self.link[d];
                seen[arrive] = true;
                d = opposite(arrive);
                if d == start {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        if self.is_unknot() {
            1
        } else {
            self.components().len()
        }
    }

    /// Over/under alternates along every strand.
    pub fn is_alternating(&self) -> bool {
        (0..self.link.len()).all(|d| self.is_over(d) != self.is_over(self.link[d]))
    }

    /// Every crossing switched.
    pub fn mirror(&self) -> Diagram {
        Diagram { link: self.link.clone(), over_even: self.over_even.iter().map(|b| !b).collect() }
    }

    /// The same link seen from the other side of the projection sphere:
    /// rotation reversed at every crossing and every crossing switched.
    pub fn turned_over(&self) -> Diagram {
        let all: Vec<usize> = (0..self.crossing_count()).collect();
        self.flipped(&all)
    }

    /// Planar mirror image with crossings unchanged as drawn; a diagram of
    /// the mirror link.
    pub fn reflected(&self) -> Diagram {
        self.turned_over().mirror()
    }

    /// Rotates the crossings in `set` by a half turn out of the plane:
    /// their rotation is reversed and their markers toggled. Only meaningful
    /// when `set` is bounded by a circle in the sphere.
    pub(crate) fn flipped(&self, set: &[usize]) -> Diagram {
        let mut in_set = vec![false; self.crossing_count()];
        for &c in set {
            in_set[c] = true;
        }
        let relabel = |d: Dart| -> Dart {
            if in_set[crossing_of(d)] && slot_of(d) % 2 == 1 {
                d ^ 2
            } else {
                d
            }
        };
        let mut link = vec![0; self.link.len()];
        for d in 0..self.link.len() {
            link[relabel(d)] = relabel(self.link[d]);
        }
        let over_even = self
            .over_even
            .iter()
            .enumerate()
            .map(|(c, &b)| b != in_set[c])
            .collect();
        Diagram { link, over_even }
    }

    /// Renumbers crossings by `perm` (old -> new) and rotates the dart slots
    /// of each crossing counterclockwise by `shift[c]` steps.
    pub fn relabeled(&self, perm: &[usize], shift: &[usize]) -> Diagram {
        let n = self.crossing_count();
        assert_eq!(perm.len(), n);
        assert_eq!(shift.len(), n);
        let map = |d: Dart| -> Dart {
            let c = crossing_of(d);
            4 * perm[c] + (slot_of(d) + 4 - shift[c] % 4) % 4
        };
        let mut link = vec![0; self.link.len()];
        let mut over_even = vec![false; n];
        for d in 0..self.link.len() {
            link[map(d)] = map(self.link[d]);
        }
        for c in 0..n {
            // slot parity flips when shifting by an odd amount
            over_even[perm[c]] = self.over_even[c] != (shift[c] % 2 == 1);
        }
        Diagram { link, over_even }
    }

    /// Crossings with two opposite corners in one face, reported with the
    /// slot `i` such that corners `i` and `i + 2` coincide.
    pub fn nugatory_crossings(&self) -> Vec<(usize, usize)> {
        if self.is_unknot() {
            return Vec::new();
        }
        let faces = self.faces();
        let mut out = Vec::new();
        for c in 0..self.crossing_count() {
            for i in 0..2 {
                if faces.face_of[4 * c + i] == faces.face_of[4 * c + i + 2] {
                    out.push((c, i));
                    break;
                }
            }
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.nugatory_crossings().is_empty()
    }

    /// Removes one nugatory crossing by turning over the part of the
    /// diagram on one side of it and joining the strands straight through.
    fn untwist(&self, c: usize, i: usize) -> Diagram {
        let base = 4 * c;
        let starts: Vec<usize> = [i + 1, i + 2]
            .iter()
            .map(|&k| crossing_of(self.link[base + (k & 3)]))
            .filter(|&w| w != c)
            .collect();
        let side = self.reachable_from(&starts, Some(c));
        let side_set: Vec<usize> = (0..self.crossing_count()).filter(|&w| side[w]).collect();
        let flipped = self.flipped(&side_set);
        flipped.remove_crossing(c)
    }

    /// Deletes crossing `c`, joining each strand straight through it.
    pub(crate) fn remove_crossing(&self, c: usize) -> Diagram {
        let n = self.crossing_count();
        if n == 1 {
            return Diagram::unknot();
        }
        let base = 4 * c;
        let in_c = |d: Dart| crossing_of(d) == c;
        let mut link = self.link.clone();
        for k in 0..4 {
            let y = self.link[base + k];
            if in_c(y) {
                continue;
            }
            // follow the strand through c until it leaves again
            let mut x = opposite(base + k);
            let mut guard = 0;
            while in_c(self.link[x]) {
                x = opposite(self.link[x]);
                guard += 1;
                assert!(guard < 8, "closed loop through a single crossing");
            }
            let z = self.link[x];
            link[y] = z;
            link[z] = y;
        }
        let new_index = |d: Dart| -> Dart {
            let w = crossing_of(d);
            let w2 = if w > c { w - 1 } else { w };
            4 * w2 + slot_of(d)
        };
        let mut new_link = Vec::with_capacity(4 * (n - 1));
        for d in 0..link.len() {
            if in_c(d) {
                continue;
            }
            new_link.push(new_index(link[d]));
        }
        let mut over_even = self.over_even.clone();
        over_even.remove(c);
        Diagram { link: new_link, over_even }
    }

    /// Removes nugatory crossings until none remain.
    pub fn reduce(&self) -> Diagram {
        let mut d = self.clone();
        while let Some(&(c, i)) = d.nugatory_crossings().first() {
            d = d.untwist(c, i);
        }
        d
    }

    /// No pair of edges separates the crossings into two nonempty sets.
    pub fn is_prime(&self) -> bool {
        self.two_edge_cut().is_none()
    }

    /// A pair of edges (given by one dart each) whose removal disconnects
    /// the crossings, if any.
    pub fn two_edge_cut(&self) -> Option<(Dart, Dart)> {
        let edges: Vec<Dart> = (0..self.link.len()).filter(|&d| d < self.link[d]).collect();
        let n = self.crossing_count();
        for (a, &e1) in edges.iter().enumerate() {
            for &e2 in &edges[a + 1..] {
                let cut = |d: Dart| {
                    d == e1 || d == e2 || self.link[d] == e1 || self.link[d] == e2
                };
                let mut seen = vec![false; n];
                let mut stack = vec![0usize];
                seen[0] = true;
                while let Some(c) = stack.pop() {
                    for d in 4 * c..4 * c + 4 {
                        if cut(d) {
                            continue;
                        }
                        let w = crossing_of(self.link[d]);
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                if seen.iter().any(|s| !s) {
                    return Some((e1, e2));
                }
            }
        }
        None
    }

    /// Connected sum along the edge at dart 0 of each summand. Of the two
    /// ways to rejoin the cut strands, the one keeping alternation is chosen
    /// when there is one.
    pub fn connected_sum(&self, other: &Diagram) -> Diagram {
        if self.is_unknot() {
            return other.clone();
        }
        if other.is_unknot() {
            return self.clone();
        }
        let off = self.link.len();
        let mut link: Vec<Dart> = self.link.clone();
        link.extend(other.link.iter().map(|&d| d + off));
        let mut over_even = self.over_even.clone();
        over_even.extend_from_slice(&other.over_even);
        let (a0, a1) = (0, self.link[0]);
        let (b0, b1) = (off, off + other.link[0]);
        let mut best = None;
        for (x, y) in [((a0, b1), (a1, b0)), ((a0, b0), (a1, b1))] {
            let mut l = link.clone();
            l[x.0] = x.1;
            l[x.1] = x.0;
            l[y.0] = y.1;
            l[y.1] = y.0;
            let d = Diagram { link: l, over_even: over_even.clone() };
            if d.euler_characteristic() != 2 {
                continue;
            }
            let alt = d.is_alternating();
            if best.is_none() || alt {
                best = Some(d);
                if alt {
                    break;
                }
            }
        }
        best.expect("connected sum is planar")
    }
}
