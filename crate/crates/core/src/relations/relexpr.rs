//! Relation expressions built from atoms, meet, composition and alternating chains.
//!
//! Text syntax: single-letter atoms (any letter except `o`; `α β γ` read as
//! `a b g`), meet by juxtaposition, composition by `o` (lowest precedence),
//! parentheses, and `chain(e1, e2, k)` for `e1 o e2 o e1 o ...` with exactly
//! `k` factors. `chain(e1, e2, 1)` is `e1` and `chain(e1, e2, 0)` the diagonal.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::binrel::BinRel;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelExpr {
    Atom(String),
    Meet(Box<RelExpr>, Box<RelExpr>),
    Compose(Box<RelExpr>, Box<RelExpr>),
    AltChain(Box<RelExpr>, Box<RelExpr>, usize),
}

impl RelExpr {
    pub fn atom(name: &str) -> RelExpr {
        RelExpr::Atom(name.to_string())
    }

    pub fn meet(a: RelExpr, b: RelExpr) -> RelExpr {
        RelExpr::Meet(Box::new(a), Box::new(b))
    }

    pub fn compose(a: RelExpr, b: RelExpr) -> RelExpr {
        RelExpr::Compose(Box::new(a), Box::new(b))
    }

    /// Left-nested composition of a nonempty list.
    pub fn compose_all(parts: Vec<RelExpr>) -> RelExpr {
        let mut it = parts.into_iter();
        let first = it.next().expect("compose_all needs at least one factor");
        it.fold(first, RelExpr::compose)
    }

    pub fn chain(a: RelExpr, b: RelExpr, k: usize) -> RelExpr {
        RelExpr::AltChain(Box::new(a), Box::new(b), k)
    }

    /// `r o r o ... o r` with `k` factors (`k = 0` is the diagonal).
    pub fn power(r: RelExpr, k: usize) -> RelExpr {
        RelExpr::chain(r.clone(), r, k)
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<String> {
        fn walk(e: &RelExpr, out: &mut Vec<String>) {
            match e {
                RelExpr::Atom(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                RelExpr::Meet(x, y) | RelExpr::Compose(x, y) | RelExpr::AltChain(x, y, _) => {
                    walk(x, out);
                    walk(y, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn eval(&self, binding: &HashMap<String, BinRel>, size: usize) -> Result<BinRel> {
        match self {
            RelExpr::Atom(a) => {
                let r = binding
                    .get(a)
                    .ok_or_else(|| Error::UnboundAtom(a.clone()))?;
                if r.size() != size {
                    return Err(Error::SizeMismatch(r.size(), size));
                }
                Ok(r.clone())
            }
            RelExpr::Meet(x, y) => Ok(x.eval(binding, size)?.meet(&y.eval(binding, size)?)),
            RelExpr::Compose(x, y) => Ok(x.eval(binding, size)?.compose(&y.eval(binding, size)?)),
            RelExpr::AltChain(x, y, k) => {
                if *k == 0 {
                    // Operands are still evaluated so unbound atoms are reported.
                    x.eval(binding, size)?;
                    y.eval(binding, size)?;
                    return Ok(BinRel::diagonal(size));
                }
                let rx = x.eval(binding, size)?;
                let ry = y.eval(binding, size)?;
                let mut acc = rx.clone();
                for i in 1..*k {
                    acc = acc.compose(if i % 2 == 1 { &ry } else { &rx });
                }
                Ok(acc)
            }
        }
    }

    /// Parses the text syntax.
    pub fn parse(text: &str) -> Result<RelExpr> {
        let mut p = ExprParser::new(text, 1, 1);
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

}

impl fmt::Display for RelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelExpr::Atom(a) => write!(f, "{a}"),
            RelExpr::Compose(x, y) => write!(f, "{x} o {y}"),
            RelExpr::Meet(x, y) => {
                for side in [x, y] {
                    if !matches!(**side, RelExpr::Atom(_) | RelExpr::Meet(..)) {
                        write!(f, "({side})")?;
                    } else {
                        write!(f, "{side}")?;
                    }
                }
                Ok(())
            }
            RelExpr::AltChain(x, y, k) => write!(f, "chain({x}, {y}, {k})"),
        }
    }
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
    line0: usize,
    col0: usize,
}

impl ExprParser {
    fn new(text: &str, line0: usize, col0: usize) -> Self {
        ExprParser {
            chars: text.chars().collect(),
            pos: 0,
            line0,
            col0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        let before = &self.chars[..self.pos.min(self.chars.len())];
        let line = before.iter().filter(|&&c| c == '\n').count();
        let col = match before.iter().rposition(|&c| c == '\n') {
            Some(nl) => self.pos - nl,
            None => self.pos + self.col0,
        };
        Error::parse(self.line0 + line, col, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let k: Vec<char> = kw.chars().collect();
        self.chars[self.pos..].starts_with(&k)
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn is_compose(&mut self) -> bool {
        if self.at_keyword("chain") {
            return false;
        }
        matches!(self.peek(), Some('o') | Some('∘'))
    }

    fn expr(&mut self) -> Result<RelExpr> {
        let mut e = self.meet()?;
        while self.is_compose() {
            self.pos += 1;
            let rhs = self.meet()?;
            e = RelExpr::compose(e, rhs);
        }
        Ok(e)
    }

    fn starts_factor(&mut self) -> bool {
        if self.at_keyword("chain") {
            return true;
        }
        match self.peek() {
            Some('(') => true,
            Some(c) => c.is_alphabetic() && c != 'o',
            None => false,
        }
    }

    fn meet(&mut self) -> Result<RelExpr> {
        if !self.starts_factor() {
            return Err(self.err("expected a relation expression"));
        }
        let mut e = self.factor()?;
        while self.starts_factor() {
            let rhs = self.factor()?;
            e = RelExpr::meet(e, rhs);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<RelExpr> {
        if self.at_keyword("chain") {
            self.pos += "chain".len();
            self.eat('(')?;
            let a = self.expr()?;
            self.eat(',')?;
            let b = self.expr()?;
            self.eat(',')?;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let k = digits.parse().map_err(|_| {
                self.pos = start;
                self.err("expected a chain length")
            })?;
            self.eat(')')?;
            return Ok(RelExpr::chain(a, b, k));
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat(')')?;
                Ok(e)
            }
            Some(c) if c.is_alphabetic() && c != 'o' => {
                self.pos += 1;
                let name = match c {
                    'α' => 'a',
                    'β' => 'b',
                    'γ' => 'g',
                    other => other,
                };
                Ok(RelExpr::Atom(name.to_string()))
            }
            _ => Err(self.err("expected an atom, `(` or `chain(`")),
        }
    }
}

/// Parses one identity `lhs <= rhs` (also accepts `⊆`).
pub fn parse_identity(text: &str) -> Result<(RelExpr, RelExpr)> {
    parse_identity_at(text, 1)
}

fn parse_identity_at(text: &str, line: usize) -> Result<(RelExpr, RelExpr)> {
    let (split, sep_len) = match (text.find("<="), text.find('⊆')) {
        (Some(i), _) => (i, 2),
        (None, Some(i)) => (i, '⊆'.len_utf8()),
        (None, None) => return Err(Error::parse(line, 1, "expected `<=` between the two sides")),
    };
    let left = &text[..split];
    let right = &text[split + sep_len..];
    let mut p = ExprParser::new(left, line, 1);
    let lhs = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected input before `<=`"));
    }
    let col0 = left.chars().count() + sep_len.min(2) + 1;
    let mut p = ExprParser::new(right, line, col0);
    let rhs = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok((lhs, rhs))
}

/// Parses an identity file: one identity per line, `#` comments, blank lines ignored.
pub fn parse_identity_file(text: &str) -> Result<Vec<(RelExpr, RelExpr)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_identity_at(line, i + 1)?);
    }
    Ok(out)
}
