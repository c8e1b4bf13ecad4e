//! Terms, assignments and evaluation.
//!
//! Text forms: the prefix syntax `(u x1 x1 (f x2 x3))` used in files and reports,
//! and the functional syntax `u(x, x, f(y, z))` accepted for equations, where
//! variable names are either indexed (`x1`, `x2`, ...) or bound by first occurrence.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Algebra, Elem, OpSymbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Variable `x_i`, `i >= 1`.
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        assert!(i >= 1, "variables are numbered from 1");
        Term::Var(i)
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    /// `op(x_{vars[0]}, x_{vars[1]}, ...)`.
    pub fn app_vars(op: impl Into<String>, vars: &[usize]) -> Term {
        Term::App(op.into(), vars.iter().map(|&v| Term::var(v)).collect())
    }

    /// `op(x1, ..., x_arity)`.
    pub fn projection_app(op: impl Into<String>, arity: usize) -> Term {
        Term::App(op.into(), (1..=arity).map(Term::Var).collect())
    }

    /// Largest variable index, 0 for ground terms.
    pub fn max_var(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::App(_, args) => args.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Replaces `x_i` by `vars[i - 1]`. Variables beyond `vars` are kept.
    pub fn substitute(&self, vars: &[Term]) -> Term {
        match self {
            Term::Var(i) => vars.get(i - 1).cloned().unwrap_or(Term::Var(*i)),
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| a.substitute(vars)).collect())
            }
        }
    }

    /// Replaces every application of a bound symbol by its definition, with the
    /// (already instantiated) arguments substituted for the definition's variables.
    pub fn instantiate(&self, bindings: &HashMap<&str, &Term>) -> Term {
        match self {
            Term::Var(i) => Term::Var(*i),
            Term::App(op, args) => {
                let args: Vec<Term> = args.iter().map(|a| a.instantiate(bindings)).collect();
                match bindings.get(op.as_str()) {
                    Some(def) => def.substitute(&args),
                    None => Term::App(op.clone(), args),
                }
            }
        }
    }

    /// Checks operation names and arities against `signature`.
    pub fn check(&self, signature: &[OpSymbol]) -> Result<()> {
        match self {
            Term::Var(0) => Err(Error::InvalidParameter("variable x0".into())),
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let sym = signature
                    .iter()
                    .find(|s| &s.name == op)
                    .ok_or_else(|| Error::UnknownOp(op.clone()))?;
                if sym.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        op: op.clone(),
                        expected: sym.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(signature))
            }
        }
    }

    /// Parses either syntax with indexed variables `x1, x2, ...`.
    pub fn parse(text: &str) -> Result<Term> {
        let mut vars = VarNames::Indexed;
        let mut p = Parser::new(text)?;
        let t = p.term(&mut vars)?;
        p.expect_end()?;
        Ok(t)
    }

    /// Renders in functional syntax with the given variable names.
    pub fn to_functional(&self, names: &[String]) -> String {
        match self {
            Term::Var(i) => names
                .get(i - 1)
                .cloned()
                .unwrap_or_else(|| format!("x{i}")),
            Term::App(op, args) => {
                let inner: Vec<String> = args.iter().map(|a| a.to_functional(names)).collect();
                format!("{op}({})", inner.join(","))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(op, args) => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Term::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Values of `x1, x2, ...` in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment(pub Vec<Elem>);

impl Assignment {
    pub fn get(&self, var: usize) -> Option<Elem> {
        self.0.get(var.checked_sub(1)?).copied()
    }
}

/// How variable identifiers are mapped to indices while parsing.
#[derive(Clone, Debug)]
pub enum VarNames {
    /// Only `x<k>` is accepted and denotes variable `k`.
    Indexed,
    /// Any identifier; indices are handed out in order of first occurrence.
    Named(Vec<String>),
}

impl VarNames {
    pub fn named() -> Self {
        VarNames::Named(Vec::new())
    }

    pub fn names(&self) -> &[String] {
        match self {
            VarNames::Indexed => &[],
            VarNames::Named(n) => n,
        }
    }

    fn resolve(&mut self, ident: &str, line: usize, col: usize) -> Result<usize> {
        match self {
            VarNames::Indexed => ident
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::parse(line, col, format!("expected variable x<k>, found `{ident}`"))),
            VarNames::Named(names) => {
                if let Some(p) = names.iter().position(|n| n == ident) {
                    Ok(p + 1)
                } else {
                    names.push(ident.to_string());
                    Ok(names.len())
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Eq,
    Ident(String),
}

/// Small tokenizer/parser shared by terms, equations and linear specs.
pub(crate) struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self> {
        Parser::with_offset(text, 1, 1)
    }

    /// Tokenizes `text`, reporting positions as if it started at `line:col`.
    pub(crate) fn with_offset(text: &str, line0: usize, col0: usize) -> Result<Self> {
        let mut toks = Vec::new();
        let (mut line, mut col) = (line0, col0);
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            let here = (line, col);
            if c == '\n' {
                line += 1;
                col = 1;
                chars.next();
                continue;
            }
            if c.is_whitespace() {
                col += 1;
                chars.next();
                continue;
            }
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                c if c.is_alphanumeric() || c == '_' || c == '\'' => {
                    let mut s = String::new();
                    while let Some(&c) = chars.peek() {
                        if c.is_alphanumeric() || c == '_' || c == '\'' {
                            s.push(c);
                            col += 1;
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push((Tok::Ident(s), here.0, here.1));
                    continue;
                }
                other => return Err(Error::parse(line, col, format!("unexpected character `{other}`"))),
            };
            toks.push((tok, here.0, here.1));
            col += 1;
            chars.next();
        }
        Ok(Parser {
            toks,
            pos: 0,
            end: (line, col),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::parse(l, c, msg)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    pub(crate) fn eat_eq(&mut self) -> Result<()> {
        self.expect(Tok::Eq, "`=`")
    }

    pub(crate) fn term(&mut self, vars: &mut VarNames) -> Result<Term> {
        self.term_in(vars, false)
    }

    /// Inside a prefix application `(op ...)` an identifier is never the head
    /// of a functional application.
    fn term_in(&mut self, vars: &mut VarNames, prefix: bool) -> Result<Term> {
        let (line, col) = self.here();
        match self.bump() {
            Some(Tok::LParen) => {
                let op = match self.bump() {
                    Some(Tok::Ident(op)) => op,
                    _ => {
                        self.pos -= 1;
                        return Err(self.err("expected operation name after `(`"));
                    }
                };
                let mut args = Vec::new();
                while self.peek() != Some(&Tok::RParen) {
                    if self.peek().is_none() {
                        return Err(self.err("unclosed `(`"));
                    }
                    args.push(self.term_in(vars, true)?);
                }
                self.pos += 1;
                Ok(Term::App(op, args))
            }
            Some(Tok::Ident(name)) => {
                if !prefix && self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let mut args = Vec::new();
                    if self.peek() == Some(&Tok::RParen) {
                        self.pos += 1;
                        return Ok(Term::App(name, args));
                    }
                    loop {
                        args.push(self.term(vars)?);
                        match self.bump() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RParen) => break,
                            _ => {
                                self.pos -= 1;
                                return Err(self.err("expected `,` or `)`"));
                            }
                        }
                    }
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::Var(vars.resolve(&name, line, col)?))
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(Error::parse(line, col, "expected a term"))
            }
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.err("expected identifier"))
            }
        }
    }

    /// Reads a parenthesized identifier list `(v1, v2, ...)`.
    pub(crate) fn ident_list(&mut self) -> Result<Vec<String>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => return Ok(out),
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected `,` or `)`"));
                }
            }
        }
    }

    pub(crate) fn peek_is_lparen(&self) -> bool {
        self.peek() == Some(&Tok::LParen)
    }
}

/// Parses `lhs = rhs` with named variables; returns both sides and the names.
pub fn parse_equation(text: &str) -> Result<(Term, Term, Vec<String>)> {
    let mut vars = VarNames::named();
    let mut p = Parser::new(text)?;
    let lhs = p.term(&mut vars)?;
    p.eat_eq()?;
    let rhs = p.term(&mut vars)?;
    p.expect_end()?;
    Ok((lhs, rhs, vars.names().to_vec()))
}

#[derive(Clone, Copy, Debug)]
enum Instr {
    Var(usize),
    Op(usize, usize),
}

/// A term resolved against a signature and flattened into postfix code.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    code: Vec<Instr>,
    max_var: usize,
}

impl CompiledTerm {
    pub fn compile(term: &Term, signature: &[OpSymbol]) -> Result<Self> {
        term.check(signature)?;
        let mut code = Vec::with_capacity(term.size());
        fn emit(t: &Term, sig: &[OpSymbol], code: &mut Vec<Instr>) {
            match t {
                Term::Var(i) => code.push(Instr::Var(i - 1)),
                Term::App(op, args) => {
                    for a in args {
                        emit(a, sig, code);
                    }
                    let idx = sig.iter().position(|s| &s.name == op).unwrap();
                    code.push(Instr::Op(idx, args.len()));
                }
            }
        }
        emit(term, signature, &mut code);
        Ok(CompiledTerm {
            code,
            max_var: term.max_var(),
        })
    }

    pub fn max_var(&self) -> usize {
        self.max_var
    }

    /// Evaluates with `vals[i]` as the value of `x_{i+1}`; `vals` must cover
    /// [`CompiledTerm::max_var`] variables.
    #[inline]
    pub fn eval<A: Algebra + ?Sized>(&self, alg: &A, vals: &[Elem], stack: &mut Vec<Elem>) -> Elem {
        stack.clear();
        for ins in &self.code {
            match *ins {
                Instr::Var(i) => stack.push(vals[i]),
                Instr::Op(op, arity) => {
                    let base = stack.len() - arity;
                    let v = alg.apply(op, &stack[base..]);
                    stack.truncate(base);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }
}

/// Value of `t` in `alg` under `a`.
pub fn eval_term<A: Algebra + ?Sized>(alg: &A, t: &Term, a: &Assignment) -> Result<Elem> {
    let compiled = CompiledTerm::compile(t, alg.signature())?;
    if compiled.max_var() > a.0.len() {
        return Err(Error::UnassignedVariable(a.0.len() + 1));
    }
    if let Some(&bad) = a.0.iter().find(|&&e| e as usize >= alg.size()) {
        return Err(Error::OutOfRange {
            elem: bad as u64,
            size: alg.size(),
        });
    }
    let mut stack = Vec::new();
    Ok(compiled.eval(alg, &a.0, &mut stack))
}
