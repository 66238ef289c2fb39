//! Conway notation for algebraic and polyhedral links.
//!
//! Grammar accepted by [`parse`]:
//!
//! ```text
//! link     := poly | sum
//! poly     := NAME? '*' slots | '.' slots
//! slots    := slot ('.' slot)*          (an empty slot stands for 1)
//! sum      := product ('+' product)*
//! product  := factor factor*            (juxtaposition, left associative)
//! factor   := INT | '-' INT | '(' sum (',' sum)* ')'
//! ```
//!
//! A parenthesised group with a single member is plain grouping; with two or
//! more members it is a ramification.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyhedra;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TangleExpr {
    Integer { value: i64 },
    Sum { left: Box<TangleExpr>, right: Box<TangleExpr> },
    Product { left: Box<TangleExpr>, right: Box<TangleExpr> },
    Ramification { parts: Vec<TangleExpr> },
    Polyhedron { name: String, slots: Vec<TangleExpr> },
}

impl TangleExpr {
    pub fn int(value: i64) -> Self {
        TangleExpr::Integer { value }
    }

    pub fn sum(left: TangleExpr, right: TangleExpr) -> Self {
        TangleExpr::Sum { left: Box::new(left), right: Box::new(right) }
    }

    pub fn product(left: TangleExpr, right: TangleExpr) -> Self {
        TangleExpr::Product { left: Box::new(left), right: Box::new(right) }
    }

    /// Panics if fewer than two parts are given.
    pub fn ramification(parts: Vec<TangleExpr>) -> Self {
        assert!(parts.len() >= 2, "ramification needs at least two parts");
        TangleExpr::Ramification { parts }
    }

    /// Left-associated product of the given factors.
    pub fn product_chain<I: IntoIterator<Item = TangleExpr>>(factors: I) -> Option<Self> {
        factors.into_iter().reduce(TangleExpr::product)
    }

    /// Sum of absolute values of the integer leaves, counting default slots
    /// of polyhedra as single crossings.
    pub fn crossing_count(&self) -> usize {
        match self {
            TangleExpr::Integer { value } => value.unsigned_abs() as usize,
            TangleExpr::Sum { left, right } | TangleExpr::Product { left, right } => {
                left.crossing_count() + right.crossing_count()
            }
            TangleExpr::Ramification { parts } => parts.iter().map(Self::crossing_count).sum(),
            TangleExpr::Polyhedron { slots, .. } => slots.iter().map(Self::crossing_count).sum(),
        }
    }

    pub fn has_negative_leaf(&self) -> bool {
        match self {
            TangleExpr::Integer { value } => *value < 0,
            TangleExpr::Sum { left, right } | TangleExpr::Product { left, right } => {
                left.has_negative_leaf() || right.has_negative_leaf()
            }
            TangleExpr::Ramification { parts } | TangleExpr::Polyhedron { slots: parts, .. } => {
                parts.iter().any(Self::has_negative_leaf)
            }
        }
    }
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polyhedron {name} has {expected} vertices but {found} slots were given")]
    Arity { name: String, expected: usize, found: usize },
    #[error("unknown basic polyhedron {0}")]
    UnknownPolyhedron(String),
    #[error("empty ramification at byte {pos}")]
    EmptyRamification { pos: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int(i64),
    LParen,
    RParen,
    Comma,
    Plus,
    Dot,
    Star,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'+' => Tok::Plus,
            b'.' => Tok::Dot,
            b'*' => Tok::Star,
            b'-' | b'0'..=b'9' => {
                let neg = c == b'-';
                if neg {
                    self.pos += 1;
                }
                let digits_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if digits_start == self.pos {
                    return Err(ParseError::Syntax {
                        pos: start,
                        msg: "expected digits after '-'".into(),
                    });
                }
                let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
                let value: i64 = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("integer {text} out of range"),
                })?;
                return Ok((Tok::Int(if neg { -value } else { value }), start));
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character {:?}", other as char),
                })
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    tok_pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut lex = Lexer { src: text.as_bytes(), pos: 0 };
        let (tok, tok_pos) = lex.next()?;
        Ok(Parser { lex, tok, tok_pos })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, pos) = self.lex.next()?;
        self.tok = tok;
        self.tok_pos = pos;
        Ok(())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.tok_pos, msg: msg.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.tok == want {
            self.bump()
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn link(&mut self) -> Result<TangleExpr, ParseError> {
        // Polyhedral prefix: "<digits>*" or a leading '.' (shorthand for 6*).
        let save = (self.lex.pos, self.tok, self.tok_pos);
        if let Tok::Int(n) = self.tok {
            self.bump()?;
            if self.tok == Tok::Star {
                self.bump()?;
                return self.polyhedron(format!("{n}*"));
            }
            self.lex.pos = save.0;
            self.tok = save.1;
            self.tok_pos = save.2;
        }
        if self.tok == Tok::Dot {
            self.bump()?;
            return self.polyhedron("6*".to_string());
        }
        let e = self.sum()?;
        if self.tok != Tok::End {
            return self.err("unexpected trailing input");
        }
        Ok(e)
    }

    fn polyhedron(&mut self, name: String) -> Result<TangleExpr, ParseError> {
        let poly = polyhedra::lookup(&name).ok_or_else(|| ParseError::UnknownPolyhedron(name.clone()))?;
        let mut slots = Vec::new();
        if self.tok != Tok::End {
            loop {
                if self.tok == Tok::Dot || self.tok == Tok::End {
                    slots.push(TangleExpr::int(1));
                } else {
                    slots.push(self.sum()?);
                }
                match self.tok {
                    Tok::Dot => self.bump()?,
                    Tok::End => break,
                    _ => return self.err("expected '.' between polyhedron slots"),
                }
            }
        }
        let expected = poly.vertex_count();
        if slots.len() > expected {
            return Err(ParseError::Arity { name, expected, found: slots.len() });
        }
        slots.resize(expected, TangleExpr::int(1));
        Ok(TangleExpr::Polyhedron { name, slots })
    }

    fn sum(&mut self) -> Result<TangleExpr, ParseError> {
        let mut left = self.product()?;
        while self.tok == Tok::Plus {
            self.bump()?;
            let right = self.product()?;
            left = TangleExpr::sum(left, right);
        }
        Ok(left)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.tok, Tok::Int(_) | Tok::LParen)
    }

    fn product(&mut self) -> Result<TangleExpr, ParseError> {
        if !self.starts_factor() {
            return self.err("expected a tangle");
        }
        let mut left = self.factor()?;
        while self.starts_factor() {
            let right = self.factor()?;
            left = TangleExpr::product(left, right);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<TangleExpr, ParseError> {
        match self.tok {
            Tok::Int(n) => {
                self.bump()?;
                Ok(TangleExpr::int(n))
            }
            Tok::LParen => {
                let open = self.tok_pos;
                self.bump()?;
                if self.tok == Tok::RParen {
                    return Err(ParseError::EmptyRamification { pos: open });
                }
                let mut parts = vec![self.sum()?];
                while self.tok == Tok::Comma {
                    self.bump()?;
                    if matches!(self.tok, Tok::Comma | Tok::RParen) {
                        return Err(ParseError::EmptyRamification { pos: self.tok_pos });
                    }
                    parts.push(self.sum()?);
                }
                self.expect(Tok::RParen, "')'")?;
                if parts.len() == 1 {
                    Ok(parts.pop().unwrap())
                } else {
                    Ok(TangleExpr::Ramification { parts })
                }
            }
            _ => self.err("expected an integer or '('"),
        }
    }
}

pub fn parse(text: &str) -> Result<TangleExpr, ParseError> {
    Parser::new(text)?.link()
}

pub fn render(expr: &TangleExpr) -> String {
    let mut out = String::new();
    write_expr(expr, &mut out);
    out
}

fn write_expr(expr: &TangleExpr, out: &mut String) {
    match expr {
        TangleExpr::Integer { value } => out.push_str(&value.to_string()),
        TangleExpr::Sum { left, right } => {
            write_expr(left, out);
            out.push('+');
            match **right {
                TangleExpr::Sum { .. } => write_grouped(right, out),
                _ => write_expr(right, out),
            }
        }
        TangleExpr::Product { left, right } => {
            match **left {
                TangleExpr::Sum { .. } => write_grouped(left, out),
                _ => write_expr(left, out),
            }
            out.push(' ');
            match **right {
                TangleExpr::Sum { .. } | TangleExpr::Product { .. } => write_grouped(right, out),
                _ => write_expr(right, out),
            }
        }
        TangleExpr::Ramification { parts } => {
            out.push('(');
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_expr(p, out);
            }
            out.push(')');
        }
        TangleExpr::Polyhedron { name, slots } => {
            out.push_str(name);
            let keep = slots
                .iter()
                .rposition(|s| *s != TangleExpr::int(1))
                .map_or(0, |i| i + 1);
            for (i, s) in slots[..keep].iter().enumerate() {
                if i > 0 {
                    out.push('.');
                }
                write_expr(s, out);
            }
        }
    }
}

fn write_grouped(expr: &TangleExpr, out: &mut String) {
    out.push('(');
    write_expr(expr, out);
    out.push(')');
}

/// Conway symbol of a rational tangle, e.g. `2 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalTangle(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("rational tangle must be a nonempty sequence of positive integers")]
    BadRational,
    #[error("a pretzel tangle needs at least two components")]
    TooFewComponents,
    #[error("component {0} begins with 1")]
    LeadingOne(usize),
    #[error("k must be at least 1")]
    BadTwist,
}

impl RationalTangle {
    pub fn new(seq: Vec<u32>) -> Result<Self, FamilyError> {
        if seq.is_empty() || seq.contains(&0) {
            return Err(FamilyError::BadRational);
        }
        Ok(RationalTangle(seq))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.len() == 1
    }

    pub fn to_expr(&self) -> TangleExpr {
        TangleExpr::product_chain(self.0.iter().map(|&n| TangleExpr::int(n as i64))).unwrap()
    }
}

impl fmt::Display for RationalTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl std::str::FromStr for RationalTangle {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let seq = s
            .split_whitespace()
            .map(|w| w.parse::<u32>().map_err(|_| FamilyError::BadRational))
            .collect::<Result<Vec<_>, _>>()?;
        RationalTangle::new(seq)
    }
}

pub fn reverse(t: &RationalTangle) -> RationalTangle {
    RationalTangle(t.0.iter().rev().copied().collect())
}

pub fn is_palindromic(t: &RationalTangle) -> bool {
    t.0.iter().eq(t.0.iter().rev())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PretzelTangle(Vec<RationalTangle>);

impl PretzelTangle {
    pub fn new(components: Vec<RationalTangle>) -> Result<Self, FamilyError> {
        if components.len() < 2 {
            return Err(FamilyError::TooFewComponents);
        }
        Ok(PretzelTangle(components))
    }

    pub fn components(&self) -> &[RationalTangle] {
        &self.0
    }

    pub fn reversed(&self) -> PretzelTangle {
        PretzelTangle(self.0.iter().rev().cloned().collect())
    }

    pub fn to_expr(&self) -> TangleExpr {
        TangleExpr::Ramification { parts: self.0.iter().map(RationalTangle::to_expr).collect() }
    }
}

impl fmt::Display for PretzelTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for PretzelTangle {
    type Err = FamilyError;

    /// Accepts `2 1,3` or `(2 1,3)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
        let comps = s.split(',').map(str::parse).collect::<Result<Vec<_>, _>>()?;
        PretzelTangle::new(comps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PretzelClass {
    pub oriented: bool,
    pub integer: bool,
}

/// Symbol-level classification: oriented means the component list differs
/// from its reverse.
pub fn classify_pretzel(p: &PretzelTangle) -> PretzelClass {
    PretzelClass {
        oriented: p.0.iter().ne(p.0.iter().rev()),
        integer: p.0.iter().all(RationalTangle::is_integer),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub pretzel: PretzelTangle,
    pub k: u32,
}

fn check_no_leading_one(p: &PretzelTangle) -> Result<(), FamilyError> {
    match p.0.iter().position(|t| t.0[0] == 1) {
        Some(i) => Err(FamilyError::LeadingOne(i)),
        None => Ok(()),
    }
}

/// `(p1,...,pn) 1^(4k-2) (p1,...,pn)`.
pub fn generate_family(params: &FamilyParams) -> Result<TangleExpr, FamilyError> {
    if params.k < 1 {
        return Err(FamilyError::BadTwist);
    }
    check_no_leading_one(&params.pretzel)?;
    let twist = (0..4 * params.k - 2).map(|_| TangleExpr::int(1));
    let factors = std::iter::once(params.pretzel.to_expr())
        .chain(twist)
        .chain(std::iter::once(params.pretzel.to_expr()));
    Ok(TangleExpr::product_chain(factors).unwrap())
}

/// `(p1,...,pn) t (p1,...,pn)`, or with the second pretzel reversed.
pub fn generate_sandwich(
    pretzel: &PretzelTangle,
    middle: &RationalTangle,
    reverse_second: bool,
) -> Result<TangleExpr, FamilyError> {
    check_no_leading_one(pretzel)?;
    let second = if reverse_second { pretzel.reversed() } else { pretzel.clone() };
    let factors = std::iter::once(pretzel.to_expr())
        .chain(middle.0.iter().map(|&n| TangleExpr::int(n as i64)))
        .chain(std::iter::once(second.to_expr()));
    Ok(TangleExpr::product_chain(factors).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> RationalTangle {
        s.parse().unwrap()
    }

    fn ram(parts: Vec<TangleExpr>) -> TangleExpr {
        TangleExpr::ramification(parts)
    }

    fn i(n: i64) -> TangleExpr {
        TangleExpr::int(n)
    }

    #[test]
    fn parses_dh_knot() {
        let r = || ram(vec![TangleExpr::product(i(2), i(1)), i(3)]);
        let want = TangleExpr::product(
            TangleExpr::product(TangleExpr::product(r(), i(1)), i(1)),
            r(),
        );
        assert_eq!(parse("(2 1,3) 1 1 (2 1,3)").unwrap(), want);
    }

    #[test]
    fn parses_elementary() {
        assert_eq!(parse("0").unwrap(), i(0));
        assert_eq!(parse("-1").unwrap(), i(-1));
    }

    #[test]
    fn parses_polyhedron_slots() {
        let e = parse("6*(2 1,2) 1.(2,2 1) 1").unwrap();
        let TangleExpr::Polyhedron { name, slots } = &e else { panic!("{e:?}") };
        assert_eq!(name, "6*");
        assert_eq!(slots.len(), 6);
        assert_eq!(
            slots[0],
            TangleExpr::product(ram(vec![TangleExpr::product(i(2), i(1)), i(2)]), i(1))
        );
        assert_eq!(
            slots[1],
            TangleExpr::product(ram(vec![i(2), TangleExpr::product(i(2), i(1))]), i(1))
        );
        assert!(slots[2..].iter().all(|s| *s == i(1)));
        assert_eq!(e.crossing_count(), 16);
    }

    #[test]
    fn leading_dot_is_six_star() {
        assert_eq!(parse(".(2,3).(3,2)").unwrap(), parse("6*(2,3).(3,2)").unwrap());
        assert_eq!(parse("6*").unwrap().crossing_count(), 6);
        assert_eq!(parse(".2..2").unwrap(), parse("6*2.1.2").unwrap());
    }

    #[test]
    fn product_is_left_associative() {
        assert_eq!(
            parse("2 3 4").unwrap(),
            TangleExpr::product(TangleExpr::product(i(2), i(3)), i(4))
        );
        assert_eq!(
            parse("2 (3 4)").unwrap(),
            TangleExpr::product(i(2), TangleExpr::product(i(3), i(4)))
        );
    }

    #[test]
    fn explicit_nesting_is_kept() {
        let e = parse("((((2,1),3),1),1)").unwrap();
        let inner = ram(vec![ram(vec![ram(vec![i(2), i(1)]), i(3)]), i(1)]);
        assert_eq!(e, ram(vec![inner, i(1)]));
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&i(3)), "3");
        assert_eq!(render(&ram(vec![rt("2 1").to_expr(), rt("3").to_expr()])), "(2 1,3)");
        assert_eq!(render(&TangleExpr::product(i(2), i(2))), "2 2");
        assert_eq!(render(&parse("6*(2 1,2) 1.(2,2 1) 1").unwrap()), "6*(2 1,2) 1.(2,2 1) 1");
        assert_eq!(render(&parse("2 (3 4)").unwrap()), "2 (3 4)");
        assert_eq!(render(&parse("(2+3) 1+4").unwrap()), "(2+3) 1+4");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("not a tangle"), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("(2,)"), Err(ParseError::EmptyRamification { .. })));
        assert!(matches!(parse("()"), Err(ParseError::EmptyRamification { pos: 0 })));
        assert!(matches!(parse("6*1.1.1.1.1.1.1"), Err(ParseError::Arity { found: 7, .. })));
        assert!(matches!(parse("7*1"), Err(ParseError::UnknownPolyhedron(_))));
        assert!(matches!(parse("2 1)"), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(parse("").is_err());
        assert!(parse("2 -").is_err());
    }

    #[test]
    fn reverse_and_palindromes() {
        assert_eq!(reverse(&rt("2 1")), rt("1 2"));
        assert_eq!(reverse(&rt("1 1")), rt("1 1"));
        assert_eq!(reverse(&rt("3 1")), rt("1 3"));
        assert!(is_palindromic(&rt("1 1")));
        assert!(!is_palindromic(&rt("2 1")));
        assert!(is_palindromic(&rt("2 1 2")));
    }

    #[test]
    fn pretzel_classes() {
        let c = classify_pretzel(&"2 1,3".parse().unwrap());
        assert_eq!(c, PretzelClass { oriented: true, integer: false });
        let c = classify_pretzel(&"3,3".parse().unwrap());
        assert_eq!(c, PretzelClass { oriented: false, integer: true });
        let c = classify_pretzel(&"(2 1,2,2)".parse().unwrap());
        assert_eq!(c, PretzelClass { oriented: true, integer: false });
    }

    #[test]
    fn family_symbols() {
        let fam = |p: &str, k| {
            render(&generate_family(&FamilyParams { pretzel: p.parse().unwrap(), k }).unwrap())
        };
        assert_eq!(fam("2 1,3", 1), "(2 1,3) 1 1 (2 1,3)");
        assert_eq!(fam("2 1,2", 1), "(2 1,2) 1 1 (2 1,2)");
        assert_eq!(fam("2 1,2,2", 2), "(2 1,2,2) 1 1 1 1 1 1 (2 1,2,2)");
    }

    #[test]
    fn family_rejects_bad_params() {
        let p: PretzelTangle = "1 2,3".parse().unwrap();
        assert_eq!(generate_family(&FamilyParams { pretzel: p, k: 1 }), Err(FamilyError::LeadingOne(0)));
        let p: PretzelTangle = "2,3".parse().unwrap();
        assert_eq!(generate_family(&FamilyParams { pretzel: p, k: 0 }), Err(FamilyError::BadTwist));
        assert!("3".parse::<PretzelTangle>().is_err());
        assert!("2 0".parse::<RationalTangle>().is_err());
    }

    #[test]
    fn sandwich_forms() {
        let p: PretzelTangle = "2 1,3".parse().unwrap();
        let e = generate_sandwich(&p, &rt("1 2 1"), true).unwrap();
        assert_eq!(render(&e), "(2 1,3) 1 2 1 (3,2 1)");
    }

    #[test]
    fn json_is_variant_tagged() {
        let v = serde_json::to_value(parse("2 1").unwrap()).unwrap();
        assert_eq!(v["type"], "product");
        assert_eq!(v["left"]["type"], "integer");
        assert_eq!(v["left"]["value"], 2);
    }
}
