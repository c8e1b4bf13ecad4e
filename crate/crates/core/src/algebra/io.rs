//! Line-oriented text format for algebras.
//!
//! ```text
//! # two-element lattice
//! algebra L2
//! size 2
//! op meet 2
//! 0 0
//! 0 1
//! op join 2
//! 0 1
//! 1 1
//! ```
//!
//! Each `op NAME ARITY` header is followed by `size^ARITY` integers, row-major
//! with the last argument fastest; they may be spread over any number of lines.
//! A file may hold several algebras, each starting with its own `algebra` line.

use std::fmt::Write as _;

use super::{table_len, Algebra, Elem, FiniteAlgebra, MAX_TABLE_LEN};
use crate::error::{Error, Result};

struct Pending {
    name: String,
    size: Option<usize>,
    ops: Vec<(String, usize, Vec<Elem>)>,
    current: Option<(String, usize, u64, Vec<Elem>)>,
    line: usize,
}

impl Pending {
    fn finish(mut self, line: usize) -> Result<FiniteAlgebra> {
        self.close_op(line)?;
        let size = self
            .size
            .ok_or_else(|| Error::parse(self.line, 1, "missing `size` line"))?;
        FiniteAlgebra::new(self.name, size, self.ops).map_err(|e| Error::parse(self.line, 1, e.to_string()))
    }

    fn close_op(&mut self, line: usize) -> Result<()> {
        if let Some((name, arity, expected, table)) = self.current.take() {
            if table.len() as u64 != expected {
                return Err(Error::parse(
                    line,
                    1,
                    format!("operation `{name}` has {} entries, expected {expected}", table.len()),
                ));
            }
            self.ops.push((name, arity, table));
        }
        Ok(())
    }
}

/// Parses every algebra in `text`.
pub fn parse_algebras(text: &str) -> Result<Vec<FiniteAlgebra>> {
    let mut out = Vec::new();
    let mut pending: Option<Pending> = None;
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let col_of = |word: &str| raw.find(word).map(|c| c + 1).unwrap_or(1);
        let mut words = trimmed.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "algebra" => {
                if let Some(p) = pending.take() {
                    out.push(p.finish(line)?);
                }
                let name = words
                    .next()
                    .ok_or_else(|| Error::parse(line, col_of(head) + 7, "missing algebra name"))?;
                pending = Some(Pending {
                    name: name.to_string(),
                    size: None,
                    ops: Vec::new(),
                    current: None,
                    line,
                });
            }
            "size" => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, 1, "`size` before `algebra`"))?;
                let word = words.next().unwrap_or("");
                let k: usize = word
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::parse(line, col_of(word), "size must be a positive integer"))?;
                p.size = Some(k);
            }
            "op" => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, 1, "`op` before `algebra`"))?;
                p.close_op(line)?;
                let size = p
                    .size
                    .ok_or_else(|| Error::parse(line, 1, "`op` before `size`"))?;
                let name = words
                    .next()
                    .ok_or_else(|| Error::parse(line, 4, "missing operation name"))?;
                let word = words.next().unwrap_or("");
                let arity: usize = word
                    .parse()
                    .map_err(|_| Error::parse(line, col_of(word).max(4), "arity must be an integer"))?;
                let expected = table_len(size, arity)
                    .filter(|&l| l <= MAX_TABLE_LEN)
                    .ok_or_else(|| Error::parse(line, 1, "operation table too large"))?;
                p.current = Some((name.to_string(), arity, expected, Vec::with_capacity(expected as usize)));
            }
            _ => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, 1, "table data before `algebra`"))?;
                let (_, _, expected, table) = p
                    .current
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, 1, format!("unexpected `{head}`")))?;
                let mut offset = 0;
                for word in trimmed.split_whitespace() {
                    let col = raw[offset..].find(word).map(|c| c + offset + 1).unwrap_or(1);
                    offset = col - 1 + word.len();
                    let v: Elem = word
                        .parse()
                        .map_err(|_| Error::parse(line, col, format!("expected an element, found `{word}`")))?;
                    if table.len() as u64 >= *expected {
                        return Err(Error::parse(line, col, "too many table entries"));
                    }
                    table.push(v);
                }
            }
        }
    }
    if let Some(p) = pending.take() {
        out.push(p.finish(last_line)?);
    }
    if out.is_empty() {
        return Err(Error::parse(1, 1, "no algebra found"));
    }
    Ok(out)
}

/// Parses a text holding exactly one algebra.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let mut all = parse_algebras(text)?;
    if all.len() != 1 {
        return Err(Error::parse(1, 1, format!("expected one algebra, found {}", all.len())));
    }
    Ok(all.pop().unwrap())
}

pub fn write_algebra(alg: &FiniteAlgebra) -> String {
    let mut s = String::new();
    writeln!(s, "algebra {}", alg.name()).unwrap();
    writeln!(s, "size {}", alg.size()).unwrap();
    for (i, sym) in alg.signature().iter().enumerate() {
        writeln!(s, "op {} {}", sym.name, sym.arity).unwrap();
        let row = if sym.arity == 0 { 1 } else { alg.size() };
        for chunk in alg.table(i).chunks(row) {
            let line: Vec<String> = chunk.iter().map(|e| e.to_string()).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
    }
    s
}

pub fn write_algebras(algs: &[FiniteAlgebra]) -> String {
    algs.iter().map(write_algebra).collect::<Vec<_>>().join("\n")
}
