//! Linear Maltsev conditions in one unknown term symbol.
//!
//! A [`LinearTermSpec`] lists equations `u(p_1..p_r) = v` or
//! `u(p_1..p_r) = u(q_1..q_r)` over named variables. Over generator algebras
//! `A_1..A_m` such a term exists iff some `r`-ary term operation of the variety,
//! restricted to the argument tuples the equations mention, meets every
//! constraint. The solver closes the `r` projections in the subpower indexed by
//! those tuples and checks each new element as it appears, so a found witness
//! has minimal depth. Exhausting the closure without a hit proves that no term
//! exists.
//!
//! File format:
//!
//! ```text
//! unknown u 3
//! eq u(x,x,y) = x
//! eq u(x,y,y) = u(y,y,x)
//! ```

use std::collections::HashMap;
use std::ops::ControlFlow;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::free::describe_status;
use crate::algebra::closure::{Block, Closure, Limits, SubpowerSpace};
use crate::algebra::equations::{Equation, EquationSuite};
use crate::algebra::term::{Parser, Term};
use crate::algebra::{check_shared_signature, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearRhs {
    Var(String),
    Pattern(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearEquation {
    pub lhs: Vec<String>,
    pub rhs: LinearRhs,
}

impl LinearEquation {
    /// Distinct variable names in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let rhs: Vec<&String> = match &self.rhs {
            LinearRhs::Var(v) => vec![v],
            LinearRhs::Pattern(p) => p.iter().collect(),
        };
        for v in self.lhs.iter().chain(rhs) {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTermSpec {
    pub unknown: String,
    pub arity: usize,
    pub equations: Vec<LinearEquation>,
}

fn names(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|s| s.to_string()).collect()
}

/// `len` copies of `fill` with `other` at 0-based position `at`.
fn all_but(len: usize, fill: &str, at: usize, other: &str) -> Vec<String> {
    (0..len)
        .map(|i| if i == at { other } else { fill }.to_string())
        .collect()
}

impl LinearTermSpec {
    pub fn new(unknown: impl Into<String>, arity: usize) -> Self {
        LinearTermSpec {
            unknown: unknown.into(),
            arity,
            equations: Vec::new(),
        }
    }

    pub fn eq_var(mut self, lhs: Vec<String>, rhs: &str) -> Self {
        self.equations.push(LinearEquation {
            lhs,
            rhs: LinearRhs::Var(rhs.to_string()),
        });
        self
    }

    pub fn eq_pattern(mut self, lhs: Vec<String>, rhs: Vec<String>) -> Self {
        self.equations.push(LinearEquation {
            lhs,
            rhs: LinearRhs::Pattern(rhs),
        });
        self
    }

    /// `n`-ary near-unanimity: `u(x,..,y,..,x) = x` for every position of `y`.
    pub fn nu(n: usize) -> Self {
        (0..n).fold(LinearTermSpec::new("u", n), |s, i| {
            s.eq_var(all_but(n, "x", i, "y"), "x")
        })
    }

    /// `(n+2)`-ary term with `u(z,z,x..x) = x`, `u(x..z at i..x) = x` for
    /// positions `i` in `b2_positions` (1-based), and
    /// `u(x,x,x,z..z) = u(x,z,..,z)`.
    fn half_like(n: usize, b2_positions: impl Iterator<Item = usize>) -> Self {
        let r = n + 2;
        let mut b1 = names(&["z", "z"]);
        b1.extend(std::iter::repeat_n("x".to_string(), n));
        let mut s = LinearTermSpec::new("u", r).eq_var(b1, "x");
        for i in b2_positions {
            s = s.eq_var(all_but(r, "x", i - 1, "z"), "x");
        }
        let mut l3 = names(&["x", "x", "x"]);
        l3.extend(std::iter::repeat_n("z".to_string(), r - 3));
        let mut r3 = names(&["x"]);
        r3.extend(std::iter::repeat_n("z".to_string(), r - 1));
        s.eq_pattern(l3, r3)
    }

    /// The `n½`-near-unanimity condition.
    pub fn half_nu(n: usize) -> Self {
        Self::half_like(n, 2..=n + 2)
    }

    /// The skew-edge condition: the half-NU condition without positions 2 and 3.
    pub fn skew_edge(n: usize) -> Self {
        Self::half_like(n, 4..=n + 2)
    }

    pub fn pixley() -> Self {
        LinearTermSpec::new("t", 3)
            .eq_var(names(&["x", "y", "y"]), "x")
            .eq_var(names(&["x", "x", "z"]), "z")
            .eq_var(names(&["x", "y", "x"]), "x")
    }

    pub fn maltsev() -> Self {
        LinearTermSpec::new("p", 3)
            .eq_var(names(&["x", "y", "y"]), "x")
            .eq_var(names(&["y", "y", "x"]), "x")
    }

    fn validate(&self) -> Result<()> {
        if self.arity == 0 {
            return Err(Error::InvalidParameter("unknown must have positive arity".into()));
        }
        for e in &self.equations {
            let bad = match &e.rhs {
                LinearRhs::Pattern(p) => p.len() != self.arity,
                LinearRhs::Var(_) => false,
            };
            if e.lhs.len() != self.arity || bad {
                return Err(Error::ArityMismatch {
                    op: self.unknown.clone(),
                    expected: self.arity,
                    found: e.lhs.len(),
                });
            }
        }
        Ok(())
    }

    /// The same condition as an equation suite with placeholder `unknown`.
    pub fn to_suite(&self) -> EquationSuite {
        let eqs = self
            .equations
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let vars = e.vars();
                let idx = |v: &String| vars.iter().position(|w| w == v).unwrap() + 1;
                let pat = |p: &[String]| {
                    Term::App(
                        self.unknown.clone(),
                        p.iter().map(|v| Term::Var(idx(v))).collect(),
                    )
                };
                let rhs = match &e.rhs {
                    LinearRhs::Var(v) => Term::Var(idx(v)),
                    LinearRhs::Pattern(p) => pat(p),
                };
                Equation::new(format!("e{}", i + 1), pat(&e.lhs), rhs, vars)
            })
            .collect();
        EquationSuite::new(format!("{}-spec", self.unknown), eqs)
    }

    /// Parses the text format; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec: Option<LinearTermSpec> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let indent = raw.len() - raw.trim_start().len();
            if let Some(rest) = t.strip_prefix("unknown") {
                if spec.is_some() {
                    return Err(Error::parse(line, indent + 1, "second `unknown` line"));
                }
                let words: Vec<&str> = rest.split_whitespace().collect();
                if words.len() != 2 {
                    return Err(Error::parse(line, indent + 1, "expected `unknown NAME ARITY`"));
                }
                let arity = words[1].parse().map_err(|_| {
                    let col = raw.rfind(words[1]).unwrap_or(0) + 1;
                    Error::parse(line, col, "arity must be an integer")
                })?;
                spec = Some(LinearTermSpec::new(words[0], arity));
            } else if let Some(rest) = t.strip_prefix("eq") {
                let s = spec
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, indent + 1, "`eq` before `unknown`"))?;
                let col0 = indent + 3;
                let mut p = Parser::with_offset(rest, line, col0)?;
                let pattern = |p: &mut Parser| -> Result<Vec<String>> {
                    let name = p.ident()?;
                    if name != s.unknown {
                        return Err(Error::parse(line, col0, format!("expected `{}(...)`", s.unknown)));
                    }
                    p.ident_list()
                };
                let lhs = pattern(&mut p)?;
                p.eat_eq()?;
                let first = p.ident()?;
                let rhs = if p.peek_is_lparen() {
                    if first != s.unknown {
                        return Err(Error::parse(line, col0, format!("expected `{}(...)`", s.unknown)));
                    }
                    LinearRhs::Pattern(p.ident_list()?)
                } else {
                    LinearRhs::Var(first)
                };
                p.expect_end()?;
                s.equations.push(LinearEquation { lhs, rhs });
            } else {
                return Err(Error::parse(line, indent + 1, "expected `unknown` or `eq`"));
            }
        }
        let spec = spec.ok_or_else(|| Error::parse(1, 1, "missing `unknown` line"))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("unknown {} {}\n", self.unknown, self.arity);
        for e in &self.equations {
            let rhs = match &e.rhs {
                LinearRhs::Var(v) => v.clone(),
                LinearRhs::Pattern(p) => format!("{}({})", self.unknown, p.join(",")),
            };
            s += &format!("eq {}({}) = {}\n", self.unknown, e.lhs.join(","), rhs);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveOutcome {
    /// A witness over `x1..x_r` of minimal depth.
    Found { term: Term, depth: u32 },
    /// The closure was exhausted: no such term exists.
    NoneExists,
    /// A budget stopped the closure first.
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub coordinates: usize,
    pub constraints: usize,
    pub elements: usize,
    pub tuples_evaluated: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub stats: SolveStats,
}

impl SolveReport {
    pub fn term(&self) -> Option<&Term> {
        match &self.outcome {
            SolveOutcome::Found { term, .. } => Some(term),
            _ => None,
        }
    }

    pub fn is_none(&self) -> bool {
        self.outcome == SolveOutcome::NoneExists
    }
}

#[derive(Clone, Copy, Debug)]
enum Target {
    Value(Elem),
    Coord(usize),
}

/// Decides `spec` over the variety generated by `gens`.
pub fn solve_linear_spec(
    gens: &[FiniteAlgebra],
    spec: &LinearTermSpec,
    limits: Limits,
) -> Result<SolveReport> {
    spec.validate()?;
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    check_shared_signature(gens.iter())?;
    let r = spec.arity;
    // Per algebra: the argument tuples in first-use order.
    let mut tuples: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); gens.len()];
    let mut index: Vec<FxHashMap<Vec<Elem>, usize>> = vec![FxHashMap::default(); gens.len()];
    let mut raw: Vec<(usize, usize, Target)> = Vec::new();
    for (ai, a) in gens.iter().enumerate() {
        let mut local = |t: Vec<Elem>| -> usize {
            let next = tuples[ai].len();
            *index[ai].entry(t.clone()).or_insert_with(|| {
                tuples[ai].push(t);
                next
            })
        };
        for e in &spec.equations {
            let vars = e.vars();
            let pos = |v: &String| vars.iter().position(|w| w == v).unwrap();
            let mut sigma = vec![0 as Elem; vars.len()];
            loop {
                let inst = |p: &[String]| p.iter().map(|v| sigma[pos(v)]).collect::<Vec<_>>();
                let l = local(inst(&e.lhs));
                let target = match &e.rhs {
                    LinearRhs::Var(v) => Target::Value(sigma[pos(v)]),
                    LinearRhs::Pattern(p) => Target::Coord(local(inst(p))),
                };
                raw.push((ai, l, target));
                if !crate::algebra::increment(&mut sigma, a.size()) {
                    break;
                }
            }
        }
    }
    let mut offsets = Vec::with_capacity(gens.len());
    let mut blocks = Vec::with_capacity(gens.len());
    let mut total = 0;
    for (ai, t) in tuples.iter().enumerate() {
        offsets.push(total);
        total += t.len();
        blocks.push(Block {
            algebra: ai,
            len: t.len(),
        });
    }
    let mut constraints: Vec<(usize, Target)> = Vec::new();
    let mut fixed: FxHashMap<usize, Elem> = FxHashMap::default();
    let mut contradiction = false;
    for (ai, l, t) in raw {
        let lc = offsets[ai] + l;
        let c = match t {
            Target::Value(v) => {
                if let Some(&old) = fixed.get(&lc) {
                    contradiction |= old != v;
                    continue;
                }
                fixed.insert(lc, v);
                (lc, Target::Value(v))
            }
            Target::Coord(rl) => {
                let rc = offsets[ai] + rl;
                if rc == lc {
                    continue;
                }
                (lc.min(rc), Target::Coord(lc.max(rc)))
            }
        };
        constraints.push(c);
    }
    let space = SubpowerSpace::new(gens.to_vec(), blocks)?;
    let stats0 = SolveStats {
        coordinates: total,
        constraints: constraints.len(),
        elements: 0,
        tuples_evaluated: 0,
    };
    if contradiction {
        return Ok(SolveReport {
            outcome: SolveOutcome::NoneExists,
            stats: stats0,
        });
    }
    let mut projections = vec![Vec::with_capacity(total); r];
    for ts in &tuples {
        for t in ts {
            for (j, p) in projections.iter_mut().enumerate() {
                p.push(t[j]);
            }
        }
    }
    let encoded = projections
        .iter()
        .map(|p| space.encode(p))
        .collect::<Result<Vec<_>>>()?;
    let satisfies = |c: &Closure, i: usize| {
        constraints.iter().all(|&(lc, t)| {
            let v = c.value(i, lc);
            match t {
                Target::Value(x) => v == x,
                Target::Coord(rc) => v == c.value(i, rc),
            }
        })
    };
    let mut found = None;
    let closure = Closure::run(space, &encoded, limits, |c, range| {
        let start = range.start;
        if let Some(i) = par::find_first(limits.exec, range.len(), |j| {
            satisfies(c, start + j).then_some(start + j)
        }) {
            found = Some(i);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let stats = SolveStats {
        elements: closure.len(),
        tuples_evaluated: closure.tuples_evaluated(),
        ..stats0
    };
    let outcome = match found {
        Some(i) => SolveOutcome::Found {
            term: closure.witness_term(i),
            depth: closure.depth(i),
        },
        None if closure.is_complete() => SolveOutcome::NoneExists,
        None => SolveOutcome::Inconclusive {
            reason: format!(
                "stopped after {} elements: {}",
                closure.len(),
                describe_status(closure.status())
            ),
        },
    };
    Ok(SolveReport { outcome, stats })
}

pub fn has_nu_term(gens: &[FiniteAlgebra], n: usize, limits: Limits) -> Result<SolveReport> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("NU arity must be at least 3, got {n}")));
    }
    solve_linear_spec(gens, &LinearTermSpec::nu(n), limits)
}

pub fn has_half_nu_term(gens: &[FiniteAlgebra], n: usize, limits: Limits) -> Result<SolveReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("half-NU needs n >= 2, got {n}")));
    }
    solve_linear_spec(gens, &LinearTermSpec::half_nu(n), limits)
}

pub fn has_skew_edge_term(gens: &[FiniteAlgebra], n: usize, limits: Limits) -> Result<SolveReport> {
    if n < 1 {
        return Err(Error::InvalidParameter("skew-edge needs n >= 1".into()));
    }
    solve_linear_spec(gens, &LinearTermSpec::skew_edge(n), limits)
}

pub fn has_pixley_term(gens: &[FiniteAlgebra], limits: Limits) -> Result<SolveReport> {
    solve_linear_spec(gens, &LinearTermSpec::pixley(), limits)
}

/// Bindings for checking a solver witness against [`LinearTermSpec::to_suite`].
pub fn witness_binding(spec: &LinearTermSpec, term: &Term) -> HashMap<String, Term> {
    HashMap::from([(spec.unknown.clone(), term.clone())])
}
