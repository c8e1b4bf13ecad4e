//! Syntactic translations between term conditions. Inputs are terms over
//! `x1..x_r` for the arity `r` of the condition; outputs are built by
//! substitution only and should be verified with the matching suite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranslationKind {
    NuFromHalf,
    HalfFromNu,
    PixleyFromHalf,
    HalfFromPixley,
    AltrrForward,
    AltrrBack,
    MajorityFromPixley,
    Symmetrize,
    DirectedFromNu,
}

impl TranslationKind {
    pub const ALL: [TranslationKind; 9] = [
        TranslationKind::NuFromHalf,
        TranslationKind::HalfFromNu,
        TranslationKind::PixleyFromHalf,
        TranslationKind::HalfFromPixley,
        TranslationKind::AltrrForward,
        TranslationKind::AltrrBack,
        TranslationKind::MajorityFromPixley,
        TranslationKind::Symmetrize,
        TranslationKind::DirectedFromNu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TranslationKind::NuFromHalf => "nu_from_half",
            TranslationKind::HalfFromNu => "half_from_nu",
            TranslationKind::PixleyFromHalf => "pixley_from_half",
            TranslationKind::HalfFromPixley => "half_from_pixley",
            TranslationKind::AltrrForward => "altrr_forward",
            TranslationKind::AltrrBack => "altrr_back",
            TranslationKind::MajorityFromPixley => "majority_from_pixley",
            TranslationKind::Symmetrize => "symmetrize",
            TranslationKind::DirectedFromNu => "directed_from_nu",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownName(format!("translation `{name}`")))
    }
}

fn vars(range: impl IntoIterator<Item = usize>) -> Vec<Term> {
    range.into_iter().map(Term::var).collect()
}

fn arity(t: &Term, max: usize, what: &str) -> Result<()> {
    if t.max_var() > max {
        return Err(Error::ArityMismatch {
            op: what.to_string(),
            expected: max,
            found: t.max_var(),
        });
    }
    Ok(())
}

/// `v(x1..x_{n+1}) = u(x1, x1, x2, ..., x_{n+1})`.
pub fn nu_from_half(u: &Term, n: usize) -> Result<Term> {
    arity(u, n + 2, "u")?;
    let mut args = vec![Term::var(1)];
    args.extend(vars(1..=n + 1));
    Ok(u.substitute(&args))
}

/// Adds two leading dummy variables to an `n`-ary term.
pub fn half_from_nu(w: &Term, n: usize) -> Result<Term> {
    arity(w, n, "w")?;
    Ok(w.substitute(&vars(3..=n + 2)))
}

/// `t(x,y,z) = u(x,y,z,z)` for a 4-ary `u`.
pub fn pixley_from_half(u: &Term) -> Result<Term> {
    arity(u, 4, "u")?;
    Ok(u.substitute(&vars([1, 2, 3, 3])))
}

/// `u(x,y,z,w) = t(x, t(y,z,w), w)`.
pub fn half_from_pixley(t: &Term) -> Result<Term> {
    arity(t, 3, "t")?;
    let inner = t.substitute(&vars([2, 3, 4]));
    Ok(t.substitute(&[Term::var(1), inner, Term::var(4)]))
}

/// `s(x,z,w) = t(x, t(x,z,w), w)`.
pub fn majority_from_pixley(t: &Term) -> Result<Term> {
    arity(t, 3, "t")?;
    let inner = t.substitute(&vars([1, 2, 3]));
    Ok(t.substitute(&[Term::var(1), inner, Term::var(3)]))
}

/// `v(x1..xn) = u(x1,x1,x1,x2,..,xn)` and `t(x,y,z) = u(x,y,z,z,..,z)`.
pub fn altrr_forward(u: &Term, n: usize) -> Result<(Term, Term)> {
    arity(u, n + 2, "u")?;
    let mut vargs = vec![Term::var(1), Term::var(1)];
    vargs.extend(vars(1..=n));
    let mut targs = vars([1, 2]);
    targs.extend(std::iter::repeat_n(Term::var(3), n));
    Ok((u.substitute(&vargs), u.substitute(&targs)))
}

/// `u(x1, x2, x3, ..) = t(x1, x2, v(x3, .., x_{n+2}))`.
pub fn altrr_back(v: &Term, t: &Term, n: usize) -> Result<Term> {
    arity(v, n, "v")?;
    arity(t, 3, "t")?;
    let inner = v.substitute(&vars(3..=n + 2));
    Ok(t.substitute(&[Term::var(1), Term::var(2), inner]))
}

/// Permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (1..=n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// `v(x1..xn) = t(.., u(x_{s(1)}, .., x_{s(n)}), ..)` with argument `k` of
/// the `n!`-ary `t` filled by the `k`-th permutation `s` in lexicographic order.
pub fn symmetrize(u: &Term, t: &Term, n: usize) -> Result<Term> {
    if n > 8 {
        return Err(Error::InvalidParameter(format!("symmetrizing {n}-ary terms needs a {n}!-ary term")));
    }
    arity(u, n, "u")?;
    let perms = permutations(n);
    arity(t, perms.len(), "t")?;
    let args: Vec<Term> = perms.iter().map(|s| u.substitute(&vars(s.iter().copied()))).collect();
    Ok(t.substitute(&args))
}

/// Directed Jónsson terms from an `n`-ary near-unanimity term `m`:
/// `t_0 = x`, `t_i = m(x^{n-1-i}, y, z^i)` for `1 <= i <= n-2`, `t_{n-1} = z`.
pub fn directed_from_nu(m: &Term, n: usize) -> Result<Vec<Term>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("NU arity must be at least 3, got {n}")));
    }
    arity(m, n, "m")?;
    let mut out = vec![Term::var(1)];
    for i in 1..=n - 2 {
        let mut args = vec![Term::var(1); n - 1 - i];
        args.push(Term::var(2));
        args.extend(std::iter::repeat_n(Term::var(3), i));
        out.push(m.substitute(&args));
    }
    out.push(Term::var(3));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let u = Term::projection_app("u", 5);
        assert_eq!(nu_from_half(&u, 3).unwrap().to_string(), "(u x1 x1 x2 x3 x4)");
        let w = Term::projection_app("w", 3);
        assert_eq!(half_from_nu(&w, 3).unwrap().to_string(), "(w x3 x4 x5)");
        let (v, t) = altrr_forward(&u, 3).unwrap();
        assert_eq!(v.to_string(), "(u x1 x1 x1 x2 x3)");
        assert_eq!(t.to_string(), "(u x1 x2 x3 x3 x3)");
        let back = altrr_back(&Term::projection_app("v", 3), &Term::projection_app("t", 3), 3).unwrap();
        assert_eq!(back.to_string(), "(t x1 x2 (v x3 x4 x5))");
        let p = Term::projection_app("t", 3);
        assert_eq!(half_from_pixley(&p).unwrap().to_string(), "(t x1 (t x2 x3 x4) x4)");
        assert_eq!(majority_from_pixley(&p).unwrap().to_string(), "(t x1 (t x1 x2 x3) x3)");
        assert!(nu_from_half(&Term::projection_app("u", 6), 3).is_err());
    }

    #[test]
    fn permutation_order() {
        assert_eq!(
            permutations(3),
            vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
                vec![3, 2, 1]
            ]
        );
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn kinds_round_trip() {
        for k in TranslationKind::ALL {
            assert_eq!(TranslationKind::parse(k.name()).unwrap(), k);
        }
    }
}
