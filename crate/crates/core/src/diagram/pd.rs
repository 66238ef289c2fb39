//! Planar diagram codes.
//!
//! Edges are numbered 1.. along the components in traversal order. Each
//! crossing is written `X[a,b,c,d]`, counterclockwise from the incoming
//! under-strand, so `a`/`c` are the under edges and `b`/`d` the over edges.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{next_ccw, Dart, Diagram, DiagramError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCode {
    pub crossings: usize,
    pub components: usize,
    pub pd: Vec<[usize; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("edge label {0} does not occur exactly twice")]
    EdgeMultiplicity(usize),
    #[error("malformed PD text: {0}")]
    Syntax(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub fn to_pd(d: &Diagram) -> PdCode {
    let mut label = vec![0usize; d.dart_count()];
    let mut incoming = vec![false; d.dart_count()];
    let mut next = 1;
    let comps = d.components();
    for comp in &comps {
        for &out in comp {
            let arrive = d.partner(out);
            label[out] = next;
            label[arrive] = next;
            incoming[arrive] = true;
            next += 1;
        }
    }
    let mut pd = Vec::with_capacity(d.crossing_count());
    for c in 0..d.crossing_count() {
        let start = (4 * c..4 * c + 4)
            .find(|&x| !d.is_over(x) && incoming[x])
            .expect("under strand enters every crossing");
        let mut row = [0; 4];
        let mut x = start;
        for slot in row.iter_mut() {
            *slot = label[x];
            x = next_ccw(x);
        }
        pd.push(row);
    }
    PdCode { crossings: d.crossing_count(), components: d.component_count(), pd }
}

pub fn from_pd(code: &[[usize; 4]]) -> Result<Diagram, PdError> {
    if code.is_empty() {
        return Ok(Diagram::unknot());
    }
    let mut seen: std::collections::BTreeMap<usize, Vec<Dart>> = Default::default();
    for (c, row) in code.iter().enumerate() {
        for (k, &e) in row.iter().enumerate() {
            seen.entry(e).or_default().push(4 * c + k);
        }
    }
    let mut link = vec![0; 4 * code.len()];
    for (e, darts) in &seen {
        if darts.len() != 2 {
            return Err(PdError::EdgeMultiplicity(*e));
        }
        link[darts[0]] = darts[1];
        link[darts[1]] = darts[0];
    }
    // slot 0 is the incoming under-strand, so the even pair is under
    let over_even = vec![false; code.len()];
    Ok(Diagram::from_parts(link, over_even)?)
}

pub fn render_pd(code: &PdCode) -> String {
    let rows: Vec<String> = code
        .pd
        .iter()
        .map(|r| format!("X[{},{},{},{}]", r[0], r[1], r[2], r[3]))
        .collect();
    format!("PD[{}]", rows.join(", "))
}

pub fn parse_pd(text: &str) -> Result<Vec<[usize; 4]>, PdError> {
    let t = text.trim();
    let inner = t
        .strip_prefix("PD[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| PdError::Syntax("expected PD[...]".into()))?;
    let mut rows = Vec::new();
    for part in inner.split("X[").skip(1) {
        let body = part
            .split(']')
            .next()
            .ok_or_else(|| PdError::Syntax("unterminated X[".into()))?;
        let nums = body
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| PdError::Syntax(format!("bad label {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let row: [usize; 4] = nums
            .try_into()
            .map_err(|_| PdError::Syntax("crossing needs four labels".into()))?;
        rows.push(row);
    }
    Ok(rows)
}
