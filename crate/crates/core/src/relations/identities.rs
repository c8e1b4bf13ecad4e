//! Congruence identities: checking instances, searching for failures, and a
//! catalog of named identities over the atoms `a`, `b`, `g`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::binrel::BinRel;
use super::congruence::{all_congruences_with, ConLimits, Congruence};
use super::relexpr::RelExpr;
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentityCheck {
    Holds,
    /// Least pair of the left side missing from the right side.
    Fails(usize, usize),
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityCheck::Holds)
    }
}

/// Whether `lhs ⊆ rhs` under `binding` on a universe of `size` elements.
pub fn check_identity_instance(
    size: usize,
    lhs: &RelExpr,
    rhs: &RelExpr,
    binding: &HashMap<String, BinRel>,
) -> Result<IdentityCheck> {
    let l = lhs.eval(binding, size)?;
    let r = rhs.eval(binding, size)?;
    Ok(match l.first_missing(&r) {
        None => IdentityCheck::Holds,
        Some((a, b)) => IdentityCheck::Fails(a, b),
    })
}

/// Binds atoms to congruences.
pub fn congruence_binding(atoms: &[String], cons: &[&Congruence]) -> HashMap<String, BinRel> {
    atoms
        .iter()
        .zip(cons)
        .map(|(a, c)| (a.clone(), c.to_rel()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub binding: Vec<(String, Congruence)>,
    pub pair: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_bindings: u64,
    pub con: ConLimits,
    pub exec: Exec,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_bindings: 1_000_000,
            con: ConLimits::default(),
            exec: Exec::default(),
        }
    }
}

/// Scans all bindings of the atoms (in order of first occurrence, first atom
/// slowest) to congruences of `alg`, in the lattice order of
/// [`super::all_congruences`], and returns the first failure.
pub fn search_identity_failure(
    alg: &FiniteAlgebra,
    lhs: &RelExpr,
    rhs: &RelExpr,
    limits: SearchLimits,
) -> Result<Option<IdentityFailure>> {
    let cons = all_congruences_with(alg, limits.con)?;
    search_over(alg.size(), &cons, lhs, rhs, limits)
}

/// Like [`search_identity_failure`] over an explicit list of congruences.
pub fn search_over(
    size: usize,
    cons: &[Congruence],
    lhs: &RelExpr,
    rhs: &RelExpr,
    limits: SearchLimits,
) -> Result<Option<IdentityFailure>> {
    let mut atoms = lhs.atoms();
    for a in rhs.atoms() {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    let k = atoms.len() as u32;
    let total = (cons.len() as u64)
        .checked_pow(k)
        .filter(|&t| t <= limits.max_bindings)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "{}^{} bindings exceed the limit of {}",
                cons.len(),
                k,
                limits.max_bindings
            ))
        })?;
    let rels: Vec<BinRel> = cons.iter().map(Congruence::to_rel).collect();
    let n = cons.len() as u64;
    let found = par::find_first(limits.exec, total as usize, |idx| {
        let mut digits = vec![0usize; atoms.len()];
        let mut rest = idx as u64;
        for d in digits.iter_mut().rev() {
            *d = (rest % n) as usize;
            rest /= n;
        }
        let binding: HashMap<String, BinRel> = atoms
            .iter()
            .zip(&digits)
            .map(|(a, &d)| (a.clone(), rels[d].clone()))
            .collect();
        match check_identity_instance(size, lhs, rhs, &binding) {
            Ok(IdentityCheck::Holds) => None,
            Ok(IdentityCheck::Fails(a, b)) => Some(Ok((digits, (a, b)))),
            Err(e) => Some(Err(e)),
        }
    });
    match found {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok((digits, pair))) => Ok(Some(IdentityFailure {
            binding: atoms
                .iter()
                .zip(&digits)
                .map(|(a, &d)| (a.clone(), cons[d].clone()))
                .collect(),
            pair,
        })),
    }
}

/// A named identity `lhs ⊆ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub lhs: RelExpr,
    pub rhs: RelExpr,
    pub atoms: Vec<String>,
}

impl Identity {
    fn new(name: String, lhs: RelExpr, rhs: RelExpr) -> Identity {
        Identity {
            name,
            lhs,
            rhs,
            atoms: vec!["a".into(), "b".into(), "g".into()],
        }
    }

    pub fn display(&self) -> String {
        format!("{} <= {}", self.lhs, self.rhs)
    }
}

/// Names accepted by [`identity_catalog`] with their parameter lists.
pub const CATALOG: &[(&str, &str)] = &[
    ("distributivity", "k"),
    ("modularity", "k"),
    ("blah", "m >= 4"),
    ("blahh", "n >= 3"),
    ("modblah", "m >= 2"),
    ("modblahh", "m >= 2"),
    ("modblahhh", "m >= 1"),
    ("blbl", "n >= 1, q >= 2"),
];

fn at(s: &str) -> RelExpr {
    RelExpr::atom(s)
}

fn ab() -> RelExpr {
    RelExpr::meet(at("a"), at("b"))
}

fn ag() -> RelExpr {
    RelExpr::meet(at("a"), at("g"))
}

fn param(name: &str, params: &[usize], i: usize, min: usize) -> Result<usize> {
    let v = *params.get(i).ok_or_else(|| {
        Error::InvalidParameter(format!("`{name}` needs {} parameter(s)", i + 1))
    })?;
    if v < min {
        return Err(Error::InvalidParameter(format!(
            "`{name}` parameter {} must be at least {min}, got {v}",
            i + 1
        )));
    }
    Ok(v)
}

/// Builds a named identity over atoms `a`, `b`, `g`.
pub fn identity_catalog(name: &str, params: &[usize]) -> Result<Identity> {
    // a(b o g)
    let dist_lhs = || RelExpr::meet(at("a"), RelExpr::compose(at("b"), at("g")));
    // a(b o ag o b)
    let mod_lhs = || {
        RelExpr::meet(
            at("a"),
            RelExpr::compose_all(vec![at("b"), ag(), at("b")]),
        )
    };
    let (lhs, rhs) = match name {
        "distributivity" => {
            let k = param(name, params, 0, 0)?;
            (dist_lhs(), RelExpr::chain(ab(), ag(), k))
        }
        "modularity" => {
            let k = param(name, params, 0, 0)?;
            (mod_lhs(), RelExpr::chain(ab(), ag(), k))
        }
        "blah" => {
            let m = param(name, params, 0, 4)?;
            let r = RelExpr::meet(at("a"), RelExpr::compose(at("g"), at("b")));
            (dist_lhs(), RelExpr::power(r, m - 4))
        }
        "blahh" => {
            let n = param(name, params, 0, 3)?;
            let r = RelExpr::meet(at("a"), RelExpr::compose(at("g"), at("b")));
            let mut parts = vec![ab()];
            if n > 3 {
                parts.push(RelExpr::power(r, n - 3));
            }
            parts.push(ag());
            (dist_lhs(), RelExpr::compose_all(parts))
        }
        "modblah" => {
            let m = param(name, params, 0, 2)?;
            (mod_lhs(), RelExpr::chain(ag(), ab(), 2 * m - 3))
        }
        "modblahh" => {
            let m = param(name, params, 0, 2)?;
            (
                mod_lhs(),
                RelExpr::compose_all(vec![ab(), RelExpr::chain(ag(), ab(), 2 * m - 3), ab()]),
            )
        }
        "modblahhh" => {
            let m = param(name, params, 0, 1)?;
            (mod_lhs(), RelExpr::chain(ab(), ag(), 2 * m - 1))
        }
        "blbl" => {
            let n = param(name, params, 0, 1)?;
            let q = param(name, params, 1, 2)?;
            let g_dot = if q % 2 == 0 { "g" } else { "b" };
            let mut inner = vec![at("b")];
            if q > 2 {
                inner.push(RelExpr::chain(ag(), ab(), q - 2));
            }
            inner.push(at(g_dot));
            let lhs = RelExpr::meet(at("a"), RelExpr::compose_all(inner));
            let r = RelExpr::meet(at("a"), RelExpr::chain(at("g"), at("b"), q));
            let rhs = RelExpr::compose_all(vec![
                ab(),
                RelExpr::power(r, n - 1),
                RelExpr::meet(at("a"), at(g_dot)),
            ]);
            (lhs, rhs)
        }
        other => return Err(Error::UnknownName(format!("identity `{other}`"))),
    };
    let label = if params.is_empty() {
        name.to_string()
    } else {
        let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        format!("{name}({})", ps.join(","))
    };
    Ok(Identity::new(label, lhs, rhs))
}
