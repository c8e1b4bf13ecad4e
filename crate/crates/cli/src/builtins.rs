//! Named algebras available with `--builtin NAME[:PARAMS]`.

use ualg_core::constructions::{self, algebras};
use ualg_core::{Algebra, FiniteAlgebra, Term};

use crate::error::{usage, CliResult};

/// Registry entries: name, parameter list, description.
pub const BUILTINS: &[(&str, &str, &str)] = &[
    ("Gnu", "n", "two-element algebra with the (n+2)-ary half near-unanimity operation u"),
    ("Njm", "j,m", "two-element lattice reduct by the (m+1)-ary operation u+ of j-subsets"),
    ("Nhalf", "n", "the generating algebras of the half near-unanimity variety for n"),
    ("A4", "n", "u-reduct of the four-element Boolean algebra"),
    ("Bool2", "", "two-element Boolean algebra (join, meet, neg)"),
    ("Bool4", "", "four-element Boolean algebra (join, meet, neg)"),
    ("Lattice2", "", "two-element lattice (join, meet)"),
    ("Semilattice2", "", "two-element meet semilattice"),
    ("Z2maltsev", "", "Z2 with p(x,y,z) = x+y+z"),
    ("Set2", "", "two-element set with no operations"),
    ("Trivial", "", "one-element algebra with a binary operation"),
];

fn split(spec: &str) -> CliResult<(String, Vec<usize>)> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p)),
        None => (spec.trim(), None),
    };
    let mut values = Vec::new();
    if let Some(p) = params {
        for part in p.split(',') {
            let v = part
                .trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("builtin `{spec}`: bad parameter `{part}`")))?;
            values.push(v);
        }
    }
    // `Gnu3` and `Nhalf4` as shorthand for a single parameter.
    let lower = name.to_ascii_lowercase();
    if params.is_none() {
        for prefix in ["gnu", "nhalf"] {
            if let Some(digits) = lower.strip_prefix(prefix) {
                if let Ok(v) = digits.parse::<usize>() {
                    return Ok((prefix.to_string(), vec![v]));
                }
            }
        }
    }
    Ok((lower, values))
}

fn params<const N: usize>(name: &str, values: &[usize]) -> CliResult<[usize; N]> {
    values
        .try_into()
        .map_err(|_| usage(format!("builtin `{name}` takes {N} parameter(s), got {}", values.len())))
}

/// Builds the algebras named by `spec`.
pub fn builtin(spec: &str) -> CliResult<Vec<FiniteAlgebra>> {
    let (name, values) = split(spec)?;
    let one = |a: FiniteAlgebra| Ok(vec![a]);
    match name.as_str() {
        "gnu" => {
            let [n] = params(&name, &values)?;
            one(algebras::build_gnu(n)?)
        }
        "njm" => {
            let [j, m] = params(&name, &values)?;
            one(algebras::build_njm_plus(j, m)?)
        }
        "nhalf" => {
            let [n] = params(&name, &values)?;
            Ok(algebras::generators_nhalf(n)?)
        }
        "a4" => {
            let [n] = params(&name, &values)?;
            one(algebras::build_a4(n)?)
        }
        other => {
            params::<0>(other, &values)?;
            one(match other {
                "bool2" => constructions::bool2(),
                "bool4" => constructions::bool4(),
                "lattice2" => constructions::lattice2(),
                "semilattice2" => constructions::semilattice2(),
                "z2maltsev" => constructions::z2_maltsev(),
                "set2" => constructions::set2(),
                "trivial" => constructions::trivial(),
                _ => return Err(usage(format!("unknown builtin `{spec}` (see `ualg build --list`)"))),
            })
        }
    }
}

/// Resolves `@builtin:NAME.OP` to the operation `OP` applied to `x1..x_r`.
pub fn builtin_op_term(spec: &str) -> CliResult<Term> {
    let (name, op) = spec
        .rsplit_once('.')
        .ok_or_else(|| usage(format!("`@builtin:{spec}` must name an operation as NAME.OP")))?;
    let algs = builtin(name)?;
    let sym = algs[0]
        .signature()
        .iter()
        .find(|s| s.name == op)
        .ok_or_else(|| usage(format!("builtin `{name}` has no operation `{op}`")))?;
    Ok(Term::projection_app(op, sym.arity))
}
