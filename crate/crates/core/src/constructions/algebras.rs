//! Concrete small algebras and the half near-unanimity generators.
//!
//! The half-NU algebras share a single `(n+2)`-ary operation named `u`.

use crate::algebra::{make_product, make_term_reduct, Elem, FiniteAlgebra, ProductView};
use crate::error::{Error, Result};
use crate::relations::Congruence;
use crate::Term;

/// Name of the operation of the half-NU algebras.
pub const U: &str = "u";

/// Two-element Boolean algebra with `join`, `meet`, `neg`.
pub fn bool2() -> FiniteAlgebra {
    FiniteAlgebra::new(
        "Bool2",
        2,
        vec![
            ("join".into(), 2, vec![0, 1, 1, 1]),
            ("meet".into(), 2, vec![0, 0, 0, 1]),
            ("neg".into(), 1, vec![1, 0]),
        ],
    )
    .expect("valid tables")
}

/// Four-element Boolean algebra `Bool2 x Bool2` with elements
/// `0, e, e', 1` as ids `0, 1, 2, 3`.
pub fn bool4() -> FiniteAlgebra {
    let b = bool2();
    make_product(&[&b, &b])
        .expect("same signature")
        .with_name("Bool4")
}

pub fn lattice2() -> FiniteAlgebra {
    FiniteAlgebra::new(
        "Lattice2",
        2,
        vec![
            ("join".into(), 2, vec![0, 1, 1, 1]),
            ("meet".into(), 2, vec![0, 0, 0, 1]),
        ],
    )
    .expect("valid tables")
}

pub fn semilattice2() -> FiniteAlgebra {
    FiniteAlgebra::new("Semilattice2", 2, vec![("meet".into(), 2, vec![0, 0, 0, 1])])
        .expect("valid tables")
}

/// `Z_2` with the Maltsev operation `x + y + z`.
pub fn z2_maltsev() -> FiniteAlgebra {
    FiniteAlgebra::from_fns("Z2maltsev", 2, vec![("p", 3, &|a: &[Elem]| a[0] ^ a[1] ^ a[2])])
        .expect("valid tables")
}

/// Two-element set with no operations.
pub fn set2() -> FiniteAlgebra {
    FiniteAlgebra::new("Set2", 2, vec![]).expect("valid")
}

/// One-element algebra with one binary operation.
pub fn trivial() -> FiniteAlgebra {
    FiniteAlgebra::new("Trivial", 1, vec![("f".into(), 2, vec![0])]).expect("valid")
}

/// `(x1 + x2') * prod (x_i + x_j)` over pairs `i < j` avoiding position 2,
/// evaluated bitwise so it works in any power of the two-element algebra.
pub fn gnu_value(args: &[u64], mask: u64) -> u64 {
    let mut out = (args[0] | !args[1]) & mask;
    let rest: Vec<u64> = std::iter::once(args[0]).chain(args[2..].iter().copied()).collect();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            out &= rest[i] | rest[j];
        }
    }
    out
}

fn check_n(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!("{what} needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// The defining term of `G^{nu,n}` over the signature of [`bool2`].
pub fn gnu_term(n: usize) -> Result<Term> {
    check_n(n, 2, "the half-NU Boolean term")?;
    let join = |a: Term, b: Term| Term::app("join", vec![a, b]);
    let mut out = join(Term::var(1), Term::app("neg", vec![Term::var(2)]));
    let positions: Vec<usize> = std::iter::once(1).chain(3..=n + 2).collect();
    for (k, &i) in positions.iter().enumerate() {
        for &j in &positions[k + 1..] {
            out = Term::app("meet", vec![out, join(Term::var(i), Term::var(j))]);
        }
    }
    Ok(out)
}

/// `G^{nu,n}`: the two-element Boolean reduct by the `(n+2)`-ary term above.
pub fn build_gnu(n: usize) -> Result<FiniteAlgebra> {
    check_n(n, 3, "G^{nu,n}")?;
    let f = |a: &[Elem]| {
        let words: Vec<u64> = a.iter().map(|&x| x as u64).collect();
        gnu_value(&words, 1) as Elem
    };
    FiniteAlgebra::from_fns(format!("Gnu{n}"), 2, vec![(U, n + 2, &f)])
}

/// `u^+_{j,m}`: the meet over all `j`-subsets `J` of `{1, 3, ..., m+1}` of
/// the join of `x_i` for `i` in `J`.
pub fn njm_value(j: usize, args: &[Elem]) -> Elem {
    let positions: Vec<usize> = std::iter::once(0).chain(2..args.len()).collect();
    let mut subset: Vec<usize> = (0..j).collect();
    loop {
        if subset.iter().all(|&k| args[positions[k]] == 0) {
            return 0;
        }
        // Next j-subset in lexicographic order.
        let mut i = j;
        while i > 0 && subset[i - 1] == positions.len() - j + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return 1;
        }
        subset[i - 1] += 1;
        for k in i..j {
            subset[k] = subset[k - 1] + 1;
        }
    }
}

/// `N^{j,m,+}`: the two-element lattice reduct by `u^+_{j,m}`.
pub fn build_njm_plus(j: usize, m: usize) -> Result<FiniteAlgebra> {
    if m < 4 || j < 2 || j > m {
        return Err(Error::InvalidParameter(format!(
            "N^{{j,m,+}} needs m >= 4 and 2 <= j <= m, got j={j}, m={m}"
        )));
    }
    let f = |a: &[Elem]| njm_value(j, a);
    FiniteAlgebra::from_fns(format!("N{j},{m}+"), 2, vec![(U, m + 1, &f)])
}

/// `l = (m+1)/2` for odd `m`, `m/2` for even `m`.
pub fn ell(m: usize) -> usize {
    if m % 2 == 1 {
        m.div_ceil(2)
    } else {
        m / 2
    }
}

/// Generators of the variety with the half-NU counterexample:
/// `G^{nu,3}` for `n = 3`, else `G^{nu,n}, N^{3,m,+}, ..., N^{l,m,+}`, `m = n+1`.
pub fn generators_nhalf(n: usize) -> Result<Vec<FiniteAlgebra>> {
    check_n(n, 3, "the half-NU variety")?;
    let mut out = vec![build_gnu(n)?];
    if n >= 4 {
        let m = n + 1;
        for j in 3..=ell(m) {
            out.push(build_njm_plus(j, m)?);
        }
    }
    Ok(out)
}

/// Element ids of the four-element Boolean algebra.
pub mod a4 {
    use crate::Elem;
    pub const ZERO: Elem = 0;
    pub const E: Elem = 1;
    pub const E_PRIME: Elem = 2;
    pub const ONE: Elem = 3;
}

/// The `u`-reduct of the four-element Boolean algebra.
pub fn build_a4(n: usize) -> Result<FiniteAlgebra> {
    check_n(n, 4, "A4")?;
    make_term_reduct(&bool4(), format!("A4_{n}"), &[(U, n + 2, gnu_term(n)?)])
}

/// The partitions `{1,e},{e',0}` and `{1,e'},{e,0}` of the four-element
/// Boolean algebra.
pub fn beta_gamma_star() -> (Congruence, Congruence) {
    use a4::*;
    let beta = Congruence::from_partition(4, &[vec![ONE, E], vec![E_PRIME, ZERO]]).expect("partition");
    let gamma = Congruence::from_partition(4, &[vec![ONE, E_PRIME], vec![E, ZERO]]).expect("partition");
    (beta, gamma)
}

/// All of `{0,1}^n` except the all-ones tuple, as ids of the `n`-th power
/// of `G^{nu,n}` (see [`ProductView::power`]).
pub fn subuniverse_b_power(n: usize) -> Result<Vec<Elem>> {
    check_n(n, 3, "the subuniverse B")?;
    let all = (1u64 << n) - 1;
    Ok((0..all).map(|x| x as Elem).collect())
}

/// The `n`-th power of `G^{nu,n}` as a lazily evaluated product.
pub fn gnu_power(g: &FiniteAlgebra, n: usize) -> Result<ProductView<'_>> {
    ProductView::power(g, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Algebra;

    fn apply(a: &FiniteAlgebra, args: &[Elem]) -> Elem {
        a.apply(0, args)
    }

    #[test]
    fn gnu_examples() {
        let g3 = build_gnu(3).unwrap();
        assert_eq!(apply(&g3, &[0, 0, 1, 1, 1]), 1);
        assert_eq!(apply(&g3, &[1, 0, 1, 1, 1]), 1);
        assert_eq!(apply(&g3, &[1, 1, 1, 0, 0]), 0);
        assert_eq!(apply(&g3, &[1, 0, 0, 0, 0]), 0);
        let g4 = build_gnu(4).unwrap();
        assert_eq!(apply(&g4, &[1, 1, 1, 0, 0, 0]), apply(&g4, &[1, 0, 0, 0, 0, 0]));
        assert!(build_gnu(2).is_err());
    }

    #[test]
    fn gnu_matches_its_term() {
        for n in 3..=5 {
            let direct = build_gnu(n).unwrap();
            let reduct = make_term_reduct(&bool2(), "r", &[(U, n + 2, gnu_term(n).unwrap())]).unwrap();
            assert_eq!(direct.table(0), reduct.table(0));
        }
    }

    #[test]
    fn njm_is_a_threshold() {
        // The meet of joins is 1 iff fewer than j of the counted arguments are 0.
        for m in 4..=8 {
            for j in 2..=m {
                let a = build_njm_plus(j, m).unwrap();
                let mut args = vec![0 as Elem; m + 1];
                for (idx, &v) in a.table(0).iter().enumerate() {
                    for (k, slot) in args.iter_mut().enumerate() {
                        *slot = ((idx >> (m - k)) & 1) as Elem;
                    }
                    let zeros = args.iter().enumerate().filter(|&(k, &x)| k != 1 && x == 0).count();
                    assert_eq!(v, (zeros < j) as Elem, "j={j} m={m} {args:?}");
                }
            }
        }
        let n35 = build_njm_plus(3, 5).unwrap();
        assert_eq!(apply(&n35, &[0, 1, 0, 0, 1, 1]), 0);
        assert_eq!(apply(&n35, &[1, 1, 0, 0, 1, 1]), 1);
    }

    #[test]
    fn generator_lists() {
        let names = |n| {
            generators_nhalf(n)
                .unwrap()
                .iter()
                .map(|a| a.name().to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(3), ["Gnu3"]);
        assert_eq!(names(4), ["Gnu4", "N3,5+"]);
        assert_eq!(names(7), ["Gnu7", "N3,8+", "N4,8+"]);
        assert_eq!(ell(5), 3);
        assert_eq!(ell(8), 4);
    }

    #[test]
    fn a4_examples() {
        use a4::*;
        let a = build_a4(4).unwrap();
        assert_eq!(apply(&a, &[ZERO, ZERO, ONE, ONE, ONE, ONE]), ONE);
        assert_eq!(apply(&a, &[E; 6]), E);
        assert_eq!(
            apply(&a, &[ONE, ONE, ONE, ONE, ZERO, ZERO]),
            apply(&a, &[ONE, ZERO, ZERO, ZERO, ZERO, ZERO])
        );
        let (beta, gamma) = beta_gamma_star();
        assert!(beta.is_congruence_of(&a));
        assert!(gamma.is_congruence_of(&a));
        assert_eq!(beta.block_ids(), &[0, 1, 0, 1]);
        assert_eq!(gamma.block_ids(), &[0, 0, 1, 1]);
    }

    #[test]
    fn b_power_size() {
        assert_eq!(subuniverse_b_power(3).unwrap().len(), 7);
        assert_eq!(subuniverse_b_power(4).unwrap().len(), 15);
    }
}
