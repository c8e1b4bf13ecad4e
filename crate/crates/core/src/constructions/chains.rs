//! Explicit term chains built from a half near-unanimity term `u`.
//!
//! Terms use the operation symbol `u` (arity `n+2`); the chains can be checked
//! directly on the half-NU algebras or rebound to another term.

use super::algebras::U;
use crate::error::{Error, Result};
use crate::Term;

fn check(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("chain needs n >= 3, got {n}")));
    }
    Ok(())
}

/// `u(a^p, b, c^q)` as a term, with variables given by index.
fn u_of(parts: &[(usize, usize)]) -> Term {
    let args = parts
        .iter()
        .flat_map(|&(var, count)| std::iter::repeat_n(Term::var(var), count))
        .collect();
    Term::app(U, args)
}

/// Jónsson terms `t_0..t_{2n-3}` in `x, y, z`:
/// `t_{2i-1} = u(x^{n+1-i}, y, z^i)`, `t_{2i} = u(x^{n+1-i}, z^{i+1})` for
/// `2i <= 2n-5`, then `t_{2n-4} = u(x, y, z^n)` and `t_{2n-3} = z`.
pub fn ipp_jonsson_terms(n: usize) -> Result<Vec<Term>> {
    check(n)?;
    let (x, y, z) = (1, 2, 3);
    let mut out = vec![Term::var(x)];
    for k in 1..=2 * n - 5 {
        let i = k.div_ceil(2);
        out.push(if k % 2 == 1 {
            u_of(&[(x, n + 1 - i), (y, 1), (z, i)])
        } else {
            u_of(&[(x, n + 1 - i), (z, i + 1)])
        });
    }
    out.push(u_of(&[(x, 1), (y, 1), (z, n)]));
    out.push(Term::var(z));
    Ok(out)
}

/// Day terms `t_0..t_{2n-2}` in `x, y, w, z`:
/// `t_{2i-1} = u(x^{n+1-i}, y, z^i)`, `t_{2i} = u(x^{n+1-i}, w, z^i)` for
/// `i <= n-2`, then `t_{2n-3} = u(y, w, z^n)` and `t_{2n-2} = z`.
pub fn ippm_day_terms(n: usize) -> Result<Vec<Term>> {
    check(n)?;
    let (x, y, w, z) = (1, 2, 3, 4);
    let mut out = vec![Term::var(x)];
    for i in 1..=n - 2 {
        out.push(u_of(&[(x, n + 1 - i), (y, 1), (z, i)]));
        out.push(u_of(&[(x, n + 1 - i), (w, 1), (z, i)]));
    }
    out.push(u_of(&[(y, 1), (w, 1), (z, n)]));
    out.push(Term::var(z));
    Ok(out)
}

/// Directed Gumm terms `d_1..d_{n-2}, q`: the odd members of
/// [`ipp_jonsson_terms`] followed by `t_{2n-4}`.
pub fn ipp_directed_gumm_terms(n: usize) -> Result<Vec<Term>> {
    let t = ipp_jonsson_terms(n)?;
    let mut out: Vec<Term> = (1..=2 * n - 5).step_by(2).map(|k| t[k].clone()).collect();
    out.push(t[2 * n - 4].clone());
    Ok(out)
}
