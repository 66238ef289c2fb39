use std::fmt;

use serde::{Deserialize, Serialize};

use super::{crossing_of, next_ccw, prev_ccw, Dart, Diagram};

/// Whether orientation-reversing homeomorphisms of the sphere count as
/// equivalences. A reversing map reads every crossing from the other side
/// of the sphere, so it carries over-strands to under-strands; this keeps
/// equivalent diagrams diagrams of the same link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct ReflectionPolicy {
    pub allow_reflection: bool,
}

impl ReflectionPolicy {
    pub const PRESERVING: ReflectionPolicy = ReflectionPolicy { allow_reflection: false };
    pub const REFLECTING: ReflectionPolicy = ReflectionPolicy { allow_reflection: true };
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramCode(Vec<u8>);

impl DiagramCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for DiagramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Breadth-first relabeling of the map starting at `root`. Returns the code
/// words and, per label, the dart sitting in slot 0 of that crossing.
fn traverse(d: &Diagram, root: Dart, reflect: bool) -> (Vec<u16>, Vec<Dart>) {
    traverse_below(d, root, reflect, None).expect("no bound given")
}

/// As `traverse`, but gives up once the words are known to compare greater
/// than `bound`.
fn traverse_below(d: &Diagram, root: Dart, reflect: bool, bound: Option<&[u16]>) -> Option<(Vec<u16>, Vec<Dart>)> {
    let n = d.crossing_count();
    let step = |x: Dart| if reflect { prev_ccw(x) } else { next_ccw(x) };
    let mut label = vec![u16::MAX; n];
    let mut base: Vec<Dart> = Vec::with_capacity(n);
    label[crossing_of(root)] = 0;
    base.push(root);
    let mut words = Vec::with_capacity(1 + 9 * n);
    // still tied with `bound` on every word so far
    let mut tied = bound.is_some();
    let mut push = |words: &mut Vec<u16>, w: u16| -> bool {
        if tied {
            let b = bound.expect("tied implies a bound")[words.len()];
            if w > b {
                return false;
            }
            tied = w == b;
        }
        words.push(w);
        true
    };
    if !push(&mut words, n as u16) {
        return None;
    }
    let mut head = 0;
    while head < base.len() {
        let b = base[head];
        head += 1;
        if !push(&mut words, u16::from(d.is_over(b) != reflect)) {
            return None;
        }
        let mut x = b;
        for _ in 0..4 {
            let y = d.partner(x);
            let w = crossing_of(y);
            if label[w] == u16::MAX {
                label[w] = base.len() as u16;
                base.push(y);
            }
            // slot of y relative to the base dart of its crossing
            let wb = base[label[w] as usize];
            let mut pos = 0u16;
            let mut z = wb;
            while z != y {
                z = step(z);
                pos += 1;
            }
            if !push(&mut words, label[w]) || !push(&mut words, pos) {
                return None;
            }
            x = step(x);
        }
    }
    Some((words, base))
}

fn encode(words: &[u16]) -> DiagramCode {
    DiagramCode(words.iter().flat_map(|w| w.to_be_bytes()).collect())
}

fn best_start(d: &Diagram, policy: ReflectionPolicy) -> (Vec<u16>, Dart, bool) {
    let mut best: Option<(Vec<u16>, Dart, bool)> = None;
    let flags: &[bool] = if policy.allow_reflection { &[false, true] } else { &[false] };
    for &reflect in flags {
        for root in 0..d.dart_count() {
            let bound = best.as_ref().map(|(b, _, _)| b.as_slice());
            if let Some((w, _)) = traverse_below(d, root, reflect, bound) {
                if best.as_ref().map_or(true, |(b, _, _)| w < *b) {
                    best = Some((w, root, reflect));
                }
            }
        }
    }
    best.unwrap()
}

/// Lexicographically least traversal code over all starting darts (and both
/// sphere orientations when reflection is allowed). Requires a connected
/// diagram.
pub fn canonical_code(d: &Diagram, policy: ReflectionPolicy) -> DiagramCode {
    if d.is_unknot() {
        return encode(&[0]);
    }
    encode(&best_start(d, policy).0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereIso {
    /// `dart_map[x]` is the dart of the second diagram that `x` maps to.
    pub dart_map: Vec<Dart>,
    pub reflected: bool,
}

impl SphereIso {
    pub fn crossing_map(&self) -> Vec<usize> {
        self.dart_map.iter().step_by(4).map(|&y| crossing_of(y)).collect()
    }
}

pub fn sphere_iso(d1: &Diagram, d2: &Diagram, policy: ReflectionPolicy) -> Option<SphereIso> {
    if d1.crossing_count() != d2.crossing_count() {
        return None;
    }
    if d1.is_unknot() {
        return Some(SphereIso { dart_map: Vec::new(), reflected: false });
    }
    let (w1, base1) = traverse(d1, 0, false);
    let flags: &[bool] = if policy.allow_reflection { &[false, true] } else { &[false] };
    for &reflect in flags {
        for root in 0..d2.dart_count() {
            let (w2, base2) = traverse(d2, root, reflect);
            if w1 != w2 {
                continue;
            }
            let mut dart_map = vec![0; d1.dart_count()];
            for (b1, b2) in base1.iter().zip(&base2) {
                let (mut x, mut y) = (*b1, *b2);
                for _ in 0..4 {
                    dart_map[x] = y;
                    x = next_ccw(x);
                    y = if reflect { prev_ccw(y) } else { next_ccw(y) };
                }
            }
            return Some(SphereIso { dart_map, reflected: reflect });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::curl;

    #[test]
    fn identity_iso() {
        let d = curl(true).connected_sum(&curl(false));
        let iso = sphere_iso(&d, &d, ReflectionPolicy::PRESERVING).unwrap();
        assert_eq!(iso.dart_map, (0..8).collect::<Vec<_>>());
        assert!(!iso.reflected);
    }

    #[test]
    fn iso_maps_structure() {
        let d = curl(true).connected_sum(&curl(false));
        let r = d.relabeled(&[1, 0], &[1, 2]);
        let iso = sphere_iso(&d, &r, ReflectionPolicy::PRESERVING).unwrap();
        for x in 0..8 {
            assert_eq!(iso.dart_map[d.partner(x)], r.partner(iso.dart_map[x]));
            assert_eq!(d.is_over(x), r.is_over(iso.dart_map[x]));
        }
        assert_eq!(
            canonical_code(&d, ReflectionPolicy::PRESERVING),
            canonical_code(&r, ReflectionPolicy::PRESERVING)
        );
    }

    #[test]
    fn turned_over_is_equivalent_only_with_reflection() {
        let d = curl(true);
        let t = d.turned_over();
        assert!(sphere_iso(&d, &t, ReflectionPolicy::REFLECTING).is_some());
        assert_eq!(
            canonical_code(&d, ReflectionPolicy::REFLECTING),
            canonical_code(&t, ReflectionPolicy::REFLECTING)
        );
    }
}
