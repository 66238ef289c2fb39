//! Basic polyhedra: 4-valent plane templates whose vertices receive tangles.
//!
//! The table is loaded from `data/polyhedra.json`. Each vertex lists its four
//! ports in counterclockwise order NE, NW, SW, SE; every port names the
//! `[vertex, port]` at the other end of its edge. A vertex flagged in
//! `transposed` receives the NW-SE reflection of its slot tangle; one flagged
//! in `flipped` receives the tangle turned over about its east-west axis.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub const NE: usize = 0;
pub const NW: usize = 1;
pub const SW: usize = 2;
pub const SE: usize = 3;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasicPolyhedron {
    pub name: String,
    pub vertices: Vec<[[usize; 2]; 4]>,
    #[serde(default)]
    pub transposed: Vec<bool>,
    #[serde(default)]
    pub flipped: Vec<bool>,
}

impl BasicPolyhedron {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn partner(&self, vertex: usize, port: usize) -> (usize, usize) {
        let [v, p] = self.vertices[vertex][port];
        (v, p)
    }

    pub fn new(
        name: &str,
        vertices: Vec<[[usize; 2]; 4]>,
        transposed: Vec<bool>,
        flipped: Vec<bool>,
    ) -> Result<Self, String> {
        let p = BasicPolyhedron { name: name.into(), vertices, transposed, flipped };
        p.validate()?;
        Ok(p)
    }

    pub fn is_transposed(&self, vertex: usize) -> bool {
        self.transposed.get(vertex).copied().unwrap_or(false)
    }

    pub fn is_flipped(&self, vertex: usize) -> bool {
        self.flipped.get(vertex).copied().unwrap_or(false)
    }

    fn validate(&self) -> Result<(), String> {
        for flags in [&self.transposed, &self.flipped] {
            if !flags.is_empty() && flags.len() != self.vertices.len() {
                return Err(format!("{}: vertex flags do not match the vertex count", self.name));
            }
        }
        for (v, ports) in self.vertices.iter().enumerate() {
            for (p, &[w, q]) in ports.iter().enumerate() {
                if w >= self.vertices.len() || q >= 4 || self.vertices[w][q] != [v, p] {
                    return Err(format!("{}: port ({v},{p}) is not paired consistently", self.name));
                }
                if (w, q) == (v, p) {
                    return Err(format!("{}: port ({v},{p}) paired with itself", self.name));
                }
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct Table {
    polyhedra: Vec<BasicPolyhedron>,
}

fn table() -> &'static [BasicPolyhedron] {
    static TABLE: OnceLock<Vec<BasicPolyhedron>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let t: Table = serde_json::from_str(include_str!("../data/polyhedra.json"))
            .expect("polyhedra.json is malformed");
        for p in &t.polyhedra {
            if let Err(e) = p.validate() {
                panic!("{e}");
            }
        }
        t.polyhedra
    })
}

pub fn lookup(name: &str) -> Option<&'static BasicPolyhedron> {
    table().iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_star_is_octahedral() {
        let p = lookup("6*").unwrap();
        assert_eq!(p.vertex_count(), 6);
        // every vertex is adjacent to four distinct others (octahedron)
        for v in 0..6 {
            let mut nbrs: Vec<usize> = (0..4).map(|q| p.partner(v, q).0).collect();
            nbrs.sort();
            nbrs.dedup();
            assert_eq!(nbrs.len(), 4);
            assert!(!nbrs.contains(&v));
        }
    }
}
