//! Named equation suites. Placeholders: `u` for the half-NU term and its
//! relatives, `t0..tk` for chains, `d1..dm, q` for directed Gumm terms,
//! `v, t` for the two-term system, `t` for Pixley, `p` for Maltsev.

use crate::algebra::equations::{Equation, EquationSuite};
use crate::error::{Error, Result};

fn eq(name: impl Into<String>, text: &str) -> Equation {
    Equation::parse(name, text).expect("well-formed suite equation")
}

fn app(op: &str, args: &[String]) -> String {
    format!("{op}({})", args.join(","))
}

/// `len` copies of `fill` with `other` at 1-based position `at`.
fn all_but(len: usize, fill: &str, at: usize, other: &str) -> Vec<String> {
    (1..=len)
        .map(|i| if i == at { other } else { fill }.to_string())
        .collect()
}

fn rep(v: &str, k: usize) -> Vec<String> {
    vec![v.to_string(); k]
}

fn cat(parts: &[Vec<String>]) -> Vec<String> {
    parts.concat()
}

fn min(kind: &str, n: usize, lo: usize) -> Result<()> {
    if n < lo {
        return Err(Error::InvalidParameter(format!("suite `{kind}` needs a parameter >= {lo}, got {n}")));
    }
    Ok(())
}

/// `n`-ary near-unanimity equations.
pub fn nu(n: usize) -> Result<EquationSuite> {
    min("nu", n, 2)?;
    let eqs = (1..=n)
        .map(|i| eq(format!("nu[{i}]"), &format!("{} = x", app("u", &all_but(n, "x", i, "y")))))
        .collect();
    Ok(EquationSuite::new(format!("nu({n})"), eqs))
}

fn b1(n: usize) -> Equation {
    eq("b1", &format!("{} = x", app("u", &cat(&[rep("z", 2), rep("x", n)]))))
}

fn b2(n: usize, i: usize) -> Equation {
    eq(format!("b2[{i}]"), &format!("{} = x", app("u", &all_but(n + 2, "x", i, "z"))))
}

fn b3(n: usize) -> Equation {
    let l = app("u", &cat(&[rep("x", 3), rep("z", n - 1)]));
    let r = app("u", &cat(&[rep("x", 1), rep("z", n + 1)]));
    eq("b3", &format!("{l} = {r}"))
}

/// The half near-unanimity equations for an `(n+2)`-ary `u`.
pub fn half_nu(n: usize) -> Result<EquationSuite> {
    min("half_nu", n, 2)?;
    let mut eqs = vec![b1(n)];
    eqs.extend((2..=n + 2).map(|i| b2(n, i)));
    eqs.push(b3(n));
    Ok(EquationSuite::new(format!("half_nu({n})"), eqs))
}

/// Half-NU equations without `b2` at positions 2 and 3.
pub fn skew_edge(n: usize) -> Result<EquationSuite> {
    min("skew_edge", n, 1)?;
    let mut eqs = vec![b1(n)];
    eqs.extend((4..=n + 2).map(|i| b2(n, i)));
    eqs.push(b3(n));
    Ok(EquationSuite::new(format!("skew_edge({n})"), eqs))
}

/// Additional equations of the Boolean half-NU term: `uu1..uu3` for
/// `3 <= i <= n+2`, and `uu4` as the adjacent transpositions of positions
/// `3..n+2`, which generate every permutation of them.
pub fn uu(n: usize) -> Result<EquationSuite> {
    min("uu", n, 2)?;
    let r = n + 2;
    let mut eqs = Vec::new();
    for i in 3..=r {
        let mut args = all_but(r, "x", i, "y");
        args[1] = "z".into();
        eqs.push(eq(format!("uu1[{i}]"), &format!("{} = x", app("u", &args))));
    }
    let named = |second: &str, i: usize| {
        let mut args: Vec<String> = (1..=r).map(|k| format!("x{k}")).collect();
        args[0] = "x".into();
        args[1] = second.into();
        args[i - 1] = "x".into();
        args
    };
    for i in 3..=r {
        let l = app("u", &named("y", i));
        let rr = app("u", &named("z", i));
        eqs.push(eq(format!("uu2[{i}]"), &format!("{l} = {rr}")));
    }
    for i in 3..=r {
        let mut args = all_but(r, "z", i, "x");
        args[0] = "x".into();
        args[1] = "x".into();
        let rhs = app("u", &cat(&[rep("x", 1), rep("z", r - 1)]));
        eqs.push(eq(format!("uu3[{i}]"), &format!("{} = {rhs}", app("u", &args))));
    }
    let vars: Vec<String> = (1..=r).map(|k| format!("x{k}")).collect();
    for k in 3..r {
        let mut swapped = vars.clone();
        swapped.swap(k - 1, k);
        eqs.push(eq(
            format!("uu4[{k},{}]", k + 1),
            &format!("{} = {}", app("u", &vars), app("u", &swapped)),
        ));
    }
    Ok(EquationSuite::new(format!("uu({n})"), eqs))
}

fn chain_common(k: usize, arity_vars: &[&str], eqs: &mut Vec<Equation>) {
    let all: Vec<String> = arity_vars.iter().map(|s| s.to_string()).collect();
    let last = arity_vars[arity_vars.len() - 1];
    eqs.push(eq("t0=x", &format!("{} = x", app("t0", &all))));
    eqs.push(eq(format!("t{k}=last"), &format!("{} = {last}", app(&format!("t{k}"), &all))));
}

/// Jónsson terms `t0..tk`.
pub fn jonsson(k: usize) -> Result<EquationSuite> {
    let mut eqs = Vec::new();
    chain_common(k, &["x", "y", "z"], &mut eqs);
    for i in 0..=k {
        eqs.push(eq(format!("t{i}(x,y,x)"), &format!("t{i}(x,y,x) = x")));
    }
    for i in 0..k {
        let pat = if i % 2 == 0 { "x,x,z" } else { "x,z,z" };
        eqs.push(eq(format!("link{i}"), &format!("t{i}({pat}) = t{}({pat})", i + 1)));
    }
    Ok(EquationSuite::new(format!("jonsson({k})"), eqs))
}

/// Directed Jónsson terms `t0..tk`.
pub fn directed_jonsson(k: usize) -> Result<EquationSuite> {
    let mut eqs = Vec::new();
    chain_common(k, &["x", "y", "z"], &mut eqs);
    for i in 0..=k {
        eqs.push(eq(format!("t{i}(x,y,x)"), &format!("t{i}(x,y,x) = x")));
    }
    for i in 0..k {
        eqs.push(eq(format!("D{i}"), &format!("t{i}(x,z,z) = t{}(x,x,z)", i + 1)));
    }
    Ok(EquationSuite::new(format!("directed_jonsson({k})"), eqs))
}

/// Day terms `t0..tk`.
pub fn day(k: usize) -> Result<EquationSuite> {
    let mut eqs = Vec::new();
    chain_common(k, &["x", "y", "z", "w"], &mut eqs);
    for i in 0..=k {
        eqs.push(eq(format!("t{i}(x,y,y,x)"), &format!("t{i}(x,y,y,x) = x")));
    }
    for i in 0..k {
        let pat = if i % 2 == 0 { "x,x,w,w" } else { "x,y,y,w" };
        eqs.push(eq(format!("link{i}"), &format!("t{i}({pat}) = t{}({pat})", i + 1)));
    }
    Ok(EquationSuite::new(format!("day({k})"), eqs))
}

/// Directed Gumm terms `d1..dm, q`.
pub fn directed_gumm(m: usize) -> Result<EquationSuite> {
    min("directed_gumm", m, 1)?;
    let mut eqs = Vec::new();
    for i in 1..=m {
        eqs.push(eq(format!("d{i}(x,y,x)"), &format!("d{i}(x,y,x) = x")));
    }
    eqs.push(eq("start", "d1(x,x,z) = x"));
    for i in 1..m {
        eqs.push(eq(format!("D{i}"), &format!("d{i}(x,z,z) = d{}(x,x,z)", i + 1)));
    }
    eqs.push(eq("last", &format!("d{m}(x,z,z) = q(x,z,z)")));
    eqs.push(eq("end", "q(x,x,z) = z"));
    Ok(EquationSuite::new(format!("directed_gumm({m})"), eqs))
}

/// The system for an `n`-ary `v` and a ternary `t`: `v` is near-unanimity
/// at positions `2..n`, `v(x,z,..,z) = t(x,z,z)` and `t(x,x,z) = z`.
pub fn altrr_system(n: usize) -> Result<EquationSuite> {
    min("altrr_system", n, 3)?;
    let mut eqs: Vec<Equation> = (2..=n)
        .map(|i| eq(format!("v[{i}]"), &format!("{} = x", app("v", &all_but(n, "x", i, "z")))))
        .collect();
    let l = app("v", &cat(&[rep("x", 1), rep("z", n - 1)]));
    eqs.push(eq("v=t", &format!("{l} = t(x,z,z)")));
    eqs.push(eq("t", "t(x,x,z) = z"));
    Ok(EquationSuite::new(format!("altrr_system({n})"), eqs))
}

pub fn pixley() -> EquationSuite {
    EquationSuite::new(
        "pixley",
        vec![
            eq("p1", "t(x,y,y) = x"),
            eq("p2", "t(x,x,z) = z"),
            eq("p3", "t(x,y,x) = x"),
        ],
    )
}

pub fn maltsev() -> EquationSuite {
    EquationSuite::new(
        "maltsev",
        vec![eq("m1", "p(x,y,y) = x"), eq("m2", "p(y,y,x) = x")],
    )
}

/// Near-unanimity of an `(n+2)`-ary `u` on the positions other than 2, with
/// a free variable in position 2.
pub fn nu_skip2(n: usize) -> Result<EquationSuite> {
    min("nu_skip2", n, 2)?;
    let r = n + 2;
    let eqs = std::iter::once(1)
        .chain(3..=r)
        .map(|i| {
            let mut args = all_but(r, "x", i, "z");
            args[1] = "y".into();
            eq(format!("nu2[{i}]"), &format!("{} = x", app("u", &args)))
        })
        .collect();
    Ok(EquationSuite::new(format!("nu_skip2({n})"), eqs))
}

/// `u` returns the common value when all arguments but two, ignoring
/// position 2, agree.
pub fn two_exceptions(n: usize) -> Result<EquationSuite> {
    min("two_exceptions", n, 2)?;
    let r = n + 2;
    let positions: Vec<usize> = std::iter::once(1).chain(3..=r).collect();
    let mut eqs = Vec::new();
    for (a, &i) in positions.iter().enumerate() {
        for &j in &positions[a + 1..] {
            let mut args = rep("x", r);
            args[1] = "y".into();
            args[i - 1] = "z".into();
            args[j - 1] = "w".into();
            eqs.push(eq(format!("two[{i},{j}]"), &format!("{} = x", app("u", &args))));
        }
    }
    Ok(EquationSuite::new(format!("two_exceptions({n})"), eqs))
}

/// `u` does not depend on its second argument.
pub fn ignores_second(n: usize) -> Result<EquationSuite> {
    min("ignores_second", n, 1)?;
    let vars: Vec<String> = (1..=n + 2).map(|k| format!("x{k}")).collect();
    let mut other = vars.clone();
    other[1] = "y".into();
    Ok(EquationSuite::new(
        format!("ignores_second({n})"),
        vec![eq("const2", &format!("{} = {}", app("u", &vars), app("u", &other)))],
    ))
}

/// Suite names accepted by [`suite_by_name`] and their parameter.
pub const SUITES: &[(&str, &str)] = &[
    ("nu", "arity n"),
    ("half_nu", "n"),
    ("skew_edge", "n"),
    ("uu", "n"),
    ("jonsson", "k"),
    ("directed_jonsson", "k"),
    ("day", "k"),
    ("directed_gumm", "number of d-terms"),
    ("altrr_system", "n"),
    ("pixley", "none"),
    ("maltsev", "none"),
    ("nu_skip2", "n"),
    ("two_exceptions", "n"),
    ("ignores_second", "n"),
];

/// Looks up `name` or `name:param`.
pub fn suite_by_name(spec: &str) -> Result<EquationSuite> {
    let (name, param) = match spec.split_once(':') {
        Some((a, b)) => {
            let p = b
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad suite parameter `{b}`")))?;
            (a.trim(), Some(p))
        }
        None => (spec.trim(), None),
    };
    let need = || param.ok_or_else(|| Error::InvalidParameter(format!("suite `{name}` needs `:N`")));
    match name {
        "nu" => nu(need()?),
        "half_nu" => half_nu(need()?),
        "skew_edge" => skew_edge(need()?),
        "uu" => uu(need()?),
        "jonsson" => jonsson(need()?),
        "directed_jonsson" => directed_jonsson(need()?),
        "day" => day(need()?),
        "directed_gumm" => directed_gumm(need()?),
        "altrr_system" => altrr_system(need()?),
        "pixley" => Ok(pixley()),
        "maltsev" => Ok(maltsev()),
        "nu_skip2" => nu_skip2(need()?),
        "two_exceptions" => two_exceptions(need()?),
        "ignores_second" => ignores_second(need()?),
        other => Err(Error::UnknownName(format!("suite `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(half_nu(3).unwrap().len(), 6);
        assert_eq!(nu(4).unwrap().len(), 4);
        assert_eq!(jonsson(3).unwrap().len(), 2 + 4 + 3);
        assert_eq!(uu(3).unwrap().len(), 3 * 3 + 2);
        assert!(skew_edge(3).unwrap().is_subset_of(&half_nu(3).unwrap()));
        assert!(!half_nu(3).unwrap().is_subset_of(&skew_edge(3).unwrap()));
    }

    #[test]
    fn rendering() {
        let s = half_nu(3).unwrap();
        let shown: Vec<String> = s.equations.iter().map(|e| e.display()).collect();
        assert_eq!(shown[0], "u(z,z,x,x,x) = x");
        assert_eq!(shown[1], "u(x,z,x,x,x) = x");
        assert_eq!(shown[5], "u(x,x,x,z,z) = u(x,z,z,z,z)");
        let d = day(2).unwrap();
        assert_eq!(d.equations[0].display(), "t0(x,y,z,w) = x");
        assert_eq!(d.equations[1].display(), "t2(x,y,z,w) = w");
    }

    #[test]
    fn lookup() {
        assert_eq!(suite_by_name("half_nu:3").unwrap(), half_nu(3).unwrap());
        assert_eq!(suite_by_name("pixley").unwrap(), pixley());
        assert!(suite_by_name("half_nu").is_err());
        assert!(suite_by_name("nope:3").is_err());
    }
}
