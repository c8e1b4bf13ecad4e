//! The four-type subset `B` of `A x A x F`, where `A` is the `u`-reduct of the
//! four-element Boolean algebra and `F` is a subset of `A_3 x G^{nu,n}`.
//!
//! An element `(p, q, r, s)` (with `(r, s)` in `F`) lies in `B` when it has
//! one of the types `(-, 0, a, -)`, `(0, 0, -, -)`, `(0, -, d, -)`,
//! `(-, -, -, 0)`.

use super::algebras::{a4, build_a4, build_gnu};
use crate::algebra::{Elem, FiniteAlgebra, ProductView};
use crate::error::{Error, Result};

/// Factor algebras `[A, A, a3, G^{nu,n}]` of the ambient product.
pub fn nua_factors(n: usize, a3: &FiniteAlgebra) -> Result<Vec<FiniteAlgebra>> {
    let a = build_a4(n)?;
    let g = build_gnu(n)?;
    if !a3.same_signature(&g) {
        return Err(Error::SignatureMismatch(format!(
            "`{}` must have the single {}-ary operation `u`",
            a3.name(),
            n + 2
        )));
    }
    Ok(vec![a.clone(), a, a3.clone(), g])
}

/// Which of the four types `(p, q, r, s)` has (bit `k` for type `k+1`).
pub fn nua_types(x: [Elem; 4], a: Elem, d: Elem) -> u8 {
    let [p, q, r, s] = x;
    let zero = a4::ZERO;
    let mut t = 0;
    if q == zero && r == a {
        t |= 1;
    }
    if p == zero && q == zero {
        t |= 2;
    }
    if p == zero && r == d {
        t |= 4;
    }
    if s == 0 {
        t |= 8;
    }
    t
}

/// All elements of `B`, in lexicographic order, for `F` given as a list of
/// pairs `(r, s)` with `r < a3_size` and `s` in `{0, 1}`.
pub fn nua_b(a3_size: usize, f_pairs: &[(Elem, Elem)], a: Elem, d: Elem) -> Result<Vec<[Elem; 4]>> {
    if a as usize >= a3_size || d as usize >= a3_size {
        return Err(Error::OutOfRange {
            elem: a.max(d) as u64,
            size: a3_size,
        });
    }
    for &(r, s) in f_pairs {
        if r as usize >= a3_size || s > 1 {
            return Err(Error::InvalidParameter(format!("pair ({r}, {s}) is not in A_3 x G")));
        }
    }
    let mut pairs = f_pairs.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    let mut out = Vec::new();
    for p in 0..4 {
        for q in 0..4 {
            for &(r, s) in &pairs {
                let x = [p, q, r, s];
                if nua_types(x, a, d) != 0 {
                    out.push(x);
                }
            }
        }
    }
    Ok(out)
}

/// Ids of `elements` in `view` (the product of [`nua_factors`]).
pub fn nua_ids(view: &ProductView<'_>, elements: &[[Elem; 4]]) -> Vec<Elem> {
    elements.iter().map(|x| view.encode(x)).collect()
}

/// The full relation `A_3 x G^{nu,n}`.
pub fn full_f(a3_size: usize) -> Vec<(Elem, Elem)> {
    (0..a3_size as Elem)
        .flat_map(|r| [(r, 0), (r, 1)])
        .collect()
}
