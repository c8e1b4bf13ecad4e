//! Exhaustive equation checking and equation suites with placeholder symbols.
//!
//! Assignments are enumerated with `x1` varying fastest; the first
//! counterexample in that order (over the algebras in list order) is reported.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::term::{parse_equation, Assignment, CompiledTerm, Term};
use super::{check_shared_signature, Algebra, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Index of the algebra in the list checked.
    pub algebra: usize,
    pub assignment: Assignment,
    pub lhs: Elem,
    pub rhs: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquationCheck {
    Holds,
    Fails(Counterexample),
}

impl EquationCheck {
    pub fn holds(&self) -> bool {
        matches!(self, EquationCheck::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            EquationCheck::Holds => None,
            EquationCheck::Fails(c) => Some(c),
        }
    }
}

/// Assignments per parallel chunk.
const CHUNK: u64 = 1 << 12;

/// Checks `lhs = rhs` under every assignment in every algebra of `algs`.
pub fn check_equation(algs: &[FiniteAlgebra], lhs: &Term, rhs: &Term) -> Result<EquationCheck> {
    check_equation_with(algs, lhs, rhs, Exec::default())
}

pub fn check_equation_with(
    algs: &[FiniteAlgebra],
    lhs: &Term,
    rhs: &Term,
    exec: Exec,
) -> Result<EquationCheck> {
    let signature = check_shared_signature(algs.iter())?;
    let l = CompiledTerm::compile(lhs, &signature)?;
    let r = CompiledTerm::compile(rhs, &signature)?;
    let vars = l.max_var().max(r.max_var());
    for (ai, alg) in algs.iter().enumerate() {
        if let Some(c) = first_failure(alg, &l, &r, vars, exec) {
            return Ok(EquationCheck::Fails(Counterexample {
                algebra: ai,
                assignment: Assignment(c.0),
                lhs: c.1,
                rhs: c.2,
            }));
        }
    }
    Ok(EquationCheck::Holds)
}

fn first_failure<A: Algebra + ?Sized>(
    alg: &A,
    l: &CompiledTerm,
    r: &CompiledTerm,
    vars: usize,
    exec: Exec,
) -> Option<(Vec<Elem>, Elem, Elem)> {
    let size = alg.size() as u64;
    let total = size.checked_pow(vars as u32).unwrap_or(u64::MAX);
    let chunks = total.div_ceil(CHUNK) as usize;
    par::find_first(exec, chunks, |c| {
        let start = c as u64 * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut vals = vec![0 as Elem; vars];
        let mut rest = start;
        for v in vals.iter_mut() {
            *v = (rest % size) as Elem;
            rest /= size;
        }
        let mut stack = Vec::new();
        for _ in start..end {
            let a = l.eval(alg, &vals, &mut stack);
            let b = r.eval(alg, &vals, &mut stack);
            if a != b {
                return Some((vals, a, b));
            }
            for v in vals.iter_mut() {
                *v += 1;
                if (*v as u64) < size {
                    break;
                }
                *v = 0;
            }
        }
        None
    })
}

/// An equation between patterns; application symbols not in the target
/// signature are placeholders bound at check time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    /// Display names of `x1, x2, ...`.
    pub vars: Vec<String>,
}

impl Equation {
    pub fn new(name: impl Into<String>, lhs: Term, rhs: Term, vars: Vec<String>) -> Self {
        Equation {
            name: name.into(),
            lhs,
            rhs,
            vars,
        }
    }

    /// Parses `lhs = rhs` in functional syntax with named variables.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let (lhs, rhs, vars) = parse_equation(text)?;
        Ok(Equation::new(name, lhs, rhs, vars))
    }

    /// Functional rendering, e.g. `u(x,x,z) = x`.
    pub fn display(&self) -> String {
        format!(
            "{} = {}",
            self.lhs.to_functional(&self.vars),
            self.rhs.to_functional(&self.vars)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSuite {
    pub name: String,
    pub equations: Vec<Equation>,
}

impl EquationSuite {
    pub fn new(name: impl Into<String>, equations: Vec<Equation>) -> Self {
        EquationSuite {
            name: name.into(),
            equations,
        }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Application symbols with their arity, in first-occurrence order.
    pub fn symbols(&self) -> Result<Vec<(String, usize)>> {
        fn walk(t: &Term, out: &mut Vec<(String, usize)>) -> Result<()> {
            if let Term::App(op, args) = t {
                match out.iter().find(|(n, _)| n == op) {
                    Some((_, a)) if *a != args.len() => {
                        return Err(Error::ArityMismatch {
                            op: op.clone(),
                            expected: *a,
                            found: args.len(),
                        })
                    }
                    Some(_) => {}
                    None => out.push((op.clone(), args.len())),
                }
                for a in args {
                    walk(a, out)?;
                }
            }
            Ok(())
        }
        let mut out = Vec::new();
        for e in &self.equations {
            walk(&e.lhs, &mut out)?;
            walk(&e.rhs, &mut out)?;
        }
        Ok(out)
    }

    /// Whether every equation of `self` occurs (same sides) in `other`.
    pub fn is_subset_of(&self, other: &EquationSuite) -> bool {
        self.equations.iter().all(|e| {
            other
                .equations
                .iter()
                .any(|f| f.lhs == e.lhs && f.rhs == e.rhs)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationResult {
    pub name: String,
    pub equation: String,
    pub check: EquationCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub results: Vec<EquationResult>,
}

impl SuiteReport {
    pub fn holds(&self) -> bool {
        self.results.iter().all(|r| r.check.holds())
    }

    pub fn failures(&self) -> impl Iterator<Item = &EquationResult> {
        self.results.iter().filter(|r| !r.check.holds())
    }
}

/// Binds the placeholders of `suite` and checks every equation.
///
/// A binding for an `r`-ary placeholder is a term over the target signature
/// in variables `x1..x_r`. Symbols of the suite that belong to the signature
/// may be left unbound.
pub fn check_suite(
    algs: &[FiniteAlgebra],
    suite: &EquationSuite,
    bindings: &HashMap<String, Term>,
) -> Result<SuiteReport> {
    check_suite_with(algs, suite, bindings, Exec::default())
}

pub fn check_suite_with(
    algs: &[FiniteAlgebra],
    suite: &EquationSuite,
    bindings: &HashMap<String, Term>,
    exec: Exec,
) -> Result<SuiteReport> {
    let signature = check_shared_signature(algs.iter())?;
    for (name, arity) in suite.symbols()? {
        match bindings.get(&name) {
            Some(def) => {
                def.check(&signature)?;
                if def.max_var() > arity {
                    return Err(Error::ArityMismatch {
                        op: name,
                        expected: arity,
                        found: def.max_var(),
                    });
                }
            }
            None => {
                if !signature.iter().any(|s| s.name == name) {
                    return Err(Error::UnboundPlaceholder(name));
                }
            }
        }
    }
    let refs: HashMap<&str, &Term> = bindings.iter().map(|(k, v)| (k.as_str(), v)).collect();
    let mut results = Vec::with_capacity(suite.len());
    for e in &suite.equations {
        let lhs = e.lhs.instantiate(&refs);
        let rhs = e.rhs.instantiate(&refs);
        let check = check_equation_with(algs, &lhs, &rhs, exec)?;
        results.push(EquationResult {
            name: e.name.clone(),
            equation: e.display(),
            check,
        });
    }
    Ok(SuiteReport {
        suite: suite.name.clone(),
        results,
    })
}

/// Bindings for a chain of placeholders `prefix0, prefix1, ...`.
pub fn chain_bindings(prefix: &str, terms: &[Term]) -> HashMap<String, Term> {
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| (format!("{prefix}{i}"), t.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_product;

    fn lattice2() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "L2",
            2,
            vec![
                ("meet".into(), 2, vec![0, 0, 0, 1]),
                ("join".into(), 2, vec![0, 1, 1, 1]),
            ],
        )
        .unwrap()
    }

    fn majority() -> Term {
        Term::parse("(join (join (meet x1 x2) (meet x2 x3)) (meet x1 x3))").unwrap()
    }

    #[test]
    fn trivial_and_failing() {
        let l = vec![lattice2()];
        let x1 = Term::var(1);
        assert!(check_equation(&l, &x1, &x1).unwrap().holds());
        let lhs = Term::parse("(meet x1 x2)").unwrap();
        let c = check_equation(&l, &lhs, &x1).unwrap();
        let c = c.counterexample().unwrap();
        assert_eq!(c.assignment.0, vec![1, 0]);
        assert_eq!((c.lhs, c.rhs), (0, 1));
    }

    #[test]
    fn majority_suite() {
        let suite = EquationSuite::new(
            "nu3",
            vec![
                Equation::parse("a", "m(y,x,x) = x").unwrap(),
                Equation::parse("b", "m(x,y,x) = x").unwrap(),
                Equation::parse("c", "m(x,x,y) = x").unwrap(),
            ],
        );
        let mut b = HashMap::new();
        b.insert("m".to_string(), majority());
        let r = check_suite(&[lattice2()], &suite, &b).unwrap();
        assert!(r.holds());
        b.insert("m".to_string(), Term::parse("(meet x1 x2)").unwrap());
        let r = check_suite(&[lattice2()], &suite, &b).unwrap();
        assert_eq!(r.failures().count(), 2);
        assert!(matches!(
            check_suite(&[lattice2()], &suite, &HashMap::new()),
            Err(Error::UnboundPlaceholder(_))
        ));
        b.insert("m".to_string(), Term::parse("(meet x1 x4)").unwrap());
        assert!(check_suite(&[lattice2()], &suite, &b).is_err());
    }

    #[test]
    fn inconsistent_placeholder_arity() {
        let suite = EquationSuite::new(
            "bad",
            vec![
                Equation::parse("a", "m(x,x) = x").unwrap(),
                Equation::parse("b", "m(x,y,x) = x").unwrap(),
            ],
        );
        assert!(suite.symbols().is_err());
    }

    #[test]
    fn equations_persist_to_products() {
        let l = lattice2();
        let l2 = make_product(&[&l, &l]).unwrap();
        let m = majority();
        let y = Term::parse("(join x1 (meet x1 x2))").unwrap();
        assert!(check_equation(std::slice::from_ref(&l), &y, &Term::var(1)).unwrap().holds());
        assert!(check_equation(std::slice::from_ref(&l2), &y, &Term::var(1)).unwrap().holds());
        let swapped = m.substitute(&[Term::var(2), Term::var(1), Term::var(3)]);
        assert!(check_equation(&[l2], &m, &swapped).unwrap().holds());
    }

    #[test]
    fn modes_agree() {
        let l = vec![lattice2()];
        let lhs = Term::parse("(meet x1 (join x2 (meet x3 (join x4 (meet x5 x6)))))").unwrap();
        let rhs = Term::parse("(meet x1 (join x2 (meet x3 (join x4 x5))))").unwrap();
        let a = check_equation_with(&l, &lhs, &rhs, Exec::Sequential).unwrap();
        let b = check_equation_with(&l, &lhs, &rhs, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(!a.holds());
    }
}
