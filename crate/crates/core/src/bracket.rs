//! Kauffman bracket by plain state summation, used to cross-check flypes and
//! chirality verdicts.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{next_ccw, Dart, Diagram};

pub const BRACKET_CAP: usize = 24;

/// Integer Laurent polynomial in `A`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly(BTreeMap<i64, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, coeff);
        }
        LaurentPoly(m)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (exp, coeff) in terms {
            p.add_term(coeff, exp);
        }
        p
    }

    fn add_term(&mut self, coeff: i64, exp: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.0.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs by ascending exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    /// `A ↦ A^{-1}`.
    pub fn invert_variable(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(c, e);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }
}

/// Sorted `coeff·A^exp` terms joined by ` + `; `0` for the zero polynomial.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(e, c)| format!("{c}·A^{e}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// JSON map from exponent (as a string key) to coefficient.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(e, c)| (e.to_string(), *c)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("{found} crossings exceed the state-sum cap of {cap}")]
    TooManyCrossings { found: usize, cap: usize },
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) -> bool {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra == rb {
        return false;
    }
    parent[ra] = rb;
    true
}

/// Number of loops after smoothing; bit `c` of `state` set means a
/// B-smoothing at crossing `c`.
fn loops(d: &Diagram, state: u64, parent: &mut Vec<usize>) -> usize {
    let m = d.dart_count();
    parent.clear();
    parent.extend(0..m);
    let mut comps = m;
    for x in 0..m {
        if union(parent, x, d.partner(x)) {
            comps -= 1;
        }
    }
    for c in 0..d.crossing_count() {
        let p = 4 * c + if d.over_even(c) { 0 } else { 1 };
        let s = |k: usize| 4 * c + (p - 4 * c + k) % 4;
        let pairs = if state >> c & 1 == 0 { [(s(1), s(2)), (s(3), s(0))] } else { [(s(0), s(1)), (s(2), s(3))] };
        for (a, b) in pairs {
            if union(parent, a, b) {
                comps -= 1;
            }
        }
    }
    comps
}

/// Sum over all smoothings of `A^(a-b) δ^(loops-1)`, `δ = -A² - A⁻²`.
pub fn bracket(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    let n = d.crossing_count();
    if n > BRACKET_CAP {
        return Err(BracketError::TooManyCrossings { found: n, cap: BRACKET_CAP });
    }
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    // counts[b][loops]
    let total: u64 = 1 << n;
    let chunk = 1u64 << n.min(12);
    let counts = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|k| {
            let mut table = vec![vec![0i64; 2 * n + 2]; n + 1];
            let mut parent = Vec::with_capacity(4 * n);
            for state in k * chunk..((k + 1) * chunk).min(total) {
                let b = state.count_ones() as usize;
                table[b][loops(d, state, &mut parent)] += 1;
            }
            table
        })
        .reduce(
            || vec![vec![0i64; 2 * n + 2]; n + 1],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    let delta = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let mut delta_pows = vec![LaurentPoly::one()];
    for i in 1..=2 * n + 1 {
        delta_pows.push(&delta_pows[i - 1] * &delta);
    }
    let mut out = LaurentPoly::zero();
    for (b, row) in counts.iter().enumerate() {
        let a = n - b;
        for (l, &count) in row.iter().enumerate() {
            if count != 0 {
                let term = &LaurentPoly::monomial(count, a as i64 - b as i64) * &delta_pows[l - 1];
                out = &out + &term;
            }
        }
    }
    Ok(out)
}

/// Writhe with component `i` of `Diagram::components` traversed backwards
/// when `reversed[i]` is set; missing entries count as not reversed.
pub fn writhe_with(d: &Diagram, reversed: &[bool]) -> i64 {
    let mut outgoing = vec![false; d.dart_count()];
    for (i, comp) in d.components().into_iter().enumerate() {
        let back = reversed.get(i).copied().unwrap_or(false);
        for x in comp {
            outgoing[if back { d.partner(x) } else { x }] = true;
        }
    }
    (0..d.crossing_count())
        .map(|c| {
            let p = 4 * c + if d.over_even(c) { 0 } else { 1 };
            let over_out: Dart = if outgoing[p] { p } else { p + 2 };
            let under_out = next_ccw(over_out);
            if outgoing[under_out] {
                1
            } else {
                -1
            }
        })
        .sum()
}

/// Writhe with every strand oriented as listed by `Diagram::components`.
pub fn writhe(d: &Diagram) -> i64 {
    writhe_with(d, &[])
}

/// `(-A³)^(-w) · b`.
pub fn normalize(b: &LaurentPoly, w: i64) -> LaurentPoly {
    let sign = if w % 2 == 0 { 1 } else { -1 };
    &LaurentPoly::monomial(sign, -3 * w) * b
}

/// `(-A³)^(-w) · <d>`.
pub fn normalized(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    Ok(normalize(&bracket(d)?, writhe(d)))
}

/// Normalized bracket under a chosen orientation, as in `writhe_with`.
pub fn normalized_with(d: &Diagram, reversed: &[bool]) -> Result<LaurentPoly, BracketError> {
    Ok(normalize(&bracket(d)?, writhe_with(d, reversed)))
}

/// Greatest writhe over all orientations of the components. The set of
/// writhes over all orientations is an invariant of the unoriented link.
pub fn max_writhe(d: &Diagram) -> i64 {
    let k = d.component_count();
    // reversing every component leaves the writhe alone, so fix the first
    (0..1u64 << k.saturating_sub(1))
        .map(|mask| {
            let rev: Vec<bool> = (0..k).map(|i| i > 0 && mask >> (i - 1) & 1 == 1).collect();
            writhe_with(d, &rev)
        })
        .max()
        .unwrap_or(0)
}

/// Normalized bracket under an orientation of greatest writhe. Unlike
/// `normalized` this agrees on every diagram of a multi-component link
/// however its components happen to be traversed.
pub fn link_normalized(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    Ok(normalize(&bracket(d)?, max_writhe(d)))
}

/// Whether the normalized bracket is symmetric under `A ↦ A^{-1}`.
pub fn mirror_symmetric(d: &Diagram) -> Result<bool, BracketError> {
    let f = normalized(d)?;
    Ok(f == f.invert_variable())
}

/// `|<d>|` at `A = e^{iπ/4}`, the determinant of the link.
pub fn determinant(d: &Diagram) -> Result<u64, BracketError> {
    let b = bracket(d)?;
    // A^k at the eighth root of unity, as a+b·i with a, b in Z[1/√2]:
    // accumulate in the basis {1, ζ, ζ², ζ³} with ζ⁴ = -1
    let mut v = [0i64; 4];
    for (e, c) in b.terms() {
        let k = e.rem_euclid(8) as usize;
        if k < 4 {
            v[k] += c;
        } else {
            v[k - 4] -= c;
        }
    }
    // |v0 + v1ζ + v2 i + v3 ζ³|², ζ = (1+i)/√2
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = v[0] as f64 + s * (v[1] - v[3]) as f64;
    let im = v[2] as f64 + s * (v[1] + v[3]) as f64;
    Ok((re * re + im * im).sqrt().round() as u64)
}
