//! Free algebras, the linear solver and level searches, checked against
//! independent oracles.

use std::collections::{BTreeSet, HashMap};

use ualg_core::algebra::closure::Limits;
use ualg_core::algebra::equations::{chain_bindings, check_suite};
use ualg_core::algebra::term::eval_term;
use ualg_core::constructions::{self, suites};
use ualg_core::maltsev::*;
use ualg_core::relations::{identity_catalog, search_identity_failure, SearchLimits};
use ualg_core::{Assignment, Elem, FiniteAlgebra, Term};

fn binding(name: &str, t: &Term) -> HashMap<String, Term> {
    HashMap::from([(name.to_string(), t.clone())])
}

/// Number of non-constant monotone Boolean functions of `k` variables.
fn monotone_nonconstant(k: usize) -> usize {
    let points = 1usize << k;
    (0..1u64 << points)
        .filter(|&f| {
            let val = |p: usize| (f >> p) & 1;
            let monotone = (0..points).all(|p| (0..points).all(|q| p & q != p || val(p) <= val(q)));
            monotone && f != 0 && f != (1u64 << points) - 1
        })
        .count()
}

#[test]
fn free_lattices_match_monotone_function_count() {
    let l = vec![constructions::lattice2()];
    for k in 2..=3 {
        let f = build_free_algebra(&l, k, Limits::default()).unwrap();
        assert_eq!(f.len(), monotone_nonconstant(k), "k={k}");
        for e in 0..f.len() {
            let w = f.witness(e);
            for (c, (ai, t)) in f.coordinates().iter().enumerate() {
                let v = eval_term(&l[*ai], &w, &Assignment(t.clone())).unwrap();
                assert_eq!(v, f.value(e, c));
            }
        }
    }
}

#[test]
fn free_algebra_projects_onto_factor() {
    // A second 2-element algebra in the lattice signature: both ops project.
    let proj = FiniteAlgebra::new(
        "P",
        2,
        vec![("join".into(), 2, vec![0, 0, 1, 1]), ("meet".into(), 2, vec![0, 1, 0, 1])],
    )
    .unwrap();
    let l = constructions::lattice2();
    for k in 1..=3 {
        let alone = build_free_algebra(std::slice::from_ref(&l), k, Limits::default()).unwrap();
        let both = build_free_algebra(&[l.clone(), proj.clone()], k, Limits::default()).unwrap();
        let width = 1usize << k;
        let alone_set: BTreeSet<Vec<Elem>> = (0..alone.len()).map(|e| alone.values(e)).collect();
        let projected: BTreeSet<Vec<Elem>> =
            (0..both.len()).map(|e| both.values(e)[..width].to_vec()).collect();
        assert_eq!(alone_set, projected, "k={k}");
    }
}

/// All ternary term operations of a 2-element algebra, as 8-bit truth tables.
fn ternary_clone(alg: &FiniteAlgebra, op: usize, arity: usize) -> BTreeSet<u8> {
    use ualg_core::Algebra;
    let proj = [0b11110000u8, 0b11001100, 0b10101010];
    let mut set: BTreeSet<u8> = proj.into_iter().collect();
    loop {
        let cur: Vec<u8> = set.iter().copied().collect();
        let mut grew = false;
        let mut idx = vec![0usize; arity];
        loop {
            let mut out = 0u8;
            for bit in 0..8 {
                let args: Vec<Elem> = idx.iter().map(|&i| ((cur[i] >> bit) & 1) as Elem).collect();
                out |= (alg.apply(op, &args) as u8) << bit;
            }
            grew |= set.insert(out);
            let mut p = arity;
            while p > 0 {
                p -= 1;
                idx[p] += 1;
                if idx[p] < cur.len() {
                    break;
                }
                idx[p] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
        if !grew {
            return set;
        }
    }
}

fn bit(f: u8, x: u8, y: u8, z: u8) -> u8 {
    (f >> (x << 2 | y << 1 | z)) & 1
}

#[test]
fn semilattice_majority_none_agrees_with_clone_enumeration() {
    let s = constructions::semilattice2();
    let clone = ternary_clone(&s, 0, 2);
    let majority = clone.iter().any(|&f| {
        (0..2).all(|x| (0..2).all(|y| bit(f, x, x, y) == x && bit(f, x, y, x) == x && bit(f, y, x, x) == x))
    });
    assert!(!majority);
    assert!(has_nu_term(&[s], 3, Limits::default()).unwrap().is_none());
}

#[test]
fn z2_pixley_none_agrees_with_clone_enumeration() {
    let z = constructions::z2_maltsev();
    let clone = ternary_clone(&z, 0, 3);
    let pixley = clone.iter().any(|&f| {
        (0..2).all(|x| (0..2).all(|y| bit(f, x, y, y) == x && bit(f, y, y, x) == x && bit(f, x, y, x) == x))
    });
    assert!(!pixley);
    assert!(has_pixley_term(&[z], Limits::default()).unwrap().is_none());
}

#[test]
fn solver_examples() {
    let lim = Limits::default();
    let bool2 = vec![constructions::bool2()];
    let rep = has_pixley_term(&bool2, lim).unwrap();
    let t = rep.term().expect("Pixley term on Bool2");
    assert!(check_suite(&bool2, &suites::pixley(), &binding("t", t)).unwrap().holds());
    assert!(has_pixley_term(&[constructions::lattice2()], lim).unwrap().is_none());

    let rep = has_half_nu_term(&bool2, 2, lim).unwrap();
    let u = rep.term().expect("5/2-NU on Bool2");
    assert!(check_suite(&bool2, &suites::half_nu(2).unwrap(), &binding("u", u)).unwrap().holds());

    let semi = vec![constructions::semilattice2()];
    assert!(has_half_nu_term(&semi, 3, lim).unwrap().is_none());
    assert!(has_skew_edge_term(&semi, 3, lim).unwrap().is_none());

    let z2 = vec![constructions::z2_maltsev()];
    let rep = has_skew_edge_term(&z2, 3, lim).unwrap();
    let u = rep.term().expect("skew-edge on Z2");
    assert!(check_suite(&z2, &suites::skew_edge(3).unwrap(), &binding("u", u)).unwrap().holds());

    let g3 = constructions::generators_nhalf(3).unwrap();
    for (name, rep, suite) in [
        ("half", has_half_nu_term(&g3, 3, lim).unwrap(), suites::half_nu(3).unwrap()),
        ("skew", has_skew_edge_term(&g3, 3, lim).unwrap(), suites::skew_edge(3).unwrap()),
        ("nu4", has_nu_term(&g3, 4, lim).unwrap(), suites::nu(4).unwrap()),
    ] {
        let u = rep.term().unwrap_or_else(|| panic!("{name}: {:?}", rep.outcome));
        assert!(check_suite(&g3, &suite, &binding("u", u)).unwrap().holds(), "{name}");
    }
    assert!(has_nu_term(&g3, 3, lim).unwrap().is_none());
}

#[test]
fn solver_witness_is_depth_minimal_and_deterministic() {
    let g3 = constructions::generators_nhalf(3).unwrap();
    let a = has_nu_term(&g3, 4, Limits::default()).unwrap();
    let b = has_nu_term(&g3, 4, Limits::default().with_exec(ualg_core::Exec::Sequential)).unwrap();
    assert_eq!(a, b);
    match a.outcome {
        SolveOutcome::Found { depth, .. } => assert_eq!(depth, 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn spec_file_solves_like_builtin() {
    let text = "unknown u 3\neq u(x,x,y) = x\neq u(x,y,x) = x\neq u(y,x,x) = x\n";
    let spec = LinearTermSpec::parse(text).unwrap();
    let l = vec![constructions::lattice2()];
    let a = solve_linear_spec(&l, &spec, Limits::default()).unwrap();
    let b = has_nu_term(&l, 3, Limits::default()).unwrap();
    assert_eq!(a.term().is_some(), b.term().is_some());
    assert!(check_suite(&l, &spec.to_suite(), &binding("u", a.term().unwrap())).unwrap().holds());
}

fn assert_chain(gens: &[FiniteAlgebra], rep: &LevelReport) {
    let w = rep.witness.as_ref().expect("witness chain");
    let k = w.len() - 1;
    let suite = match rep.kind {
        LevelKind::Distributivity => suites::jonsson(k),
        LevelKind::DirectedDistributivity => suites::directed_jonsson(k),
        LevelKind::Modularity => suites::day(k),
    }
    .unwrap();
    let r = check_suite(gens, &suite, &chain_bindings("t", w)).unwrap();
    assert!(r.holds(), "{:?}", r.failures().next());
}

#[test]
fn jonsson_levels() {
    let opts = LevelOptions::default();
    let l = vec![constructions::lattice2()];
    let rep = jonsson_level(&l, &opts).unwrap();
    assert_eq!(rep.exact(), Some(2));
    assert_chain(&l, &rep);

    let g3 = constructions::generators_nhalf(3).unwrap();
    let rep = jonsson_level(&g3, &opts).unwrap();
    assert_eq!(rep.exact(), Some(3));
    assert!(rep.stats.free_size <= 64);
    assert_chain(&g3, &rep);

    let semi = vec![constructions::semilattice2()];
    for k in [2, 5, 9] {
        let rep = jonsson_level(&semi, &opts.with_max_k(k)).unwrap();
        assert!(matches!(rep.result, LevelResult::NoneWithin { .. }), "{:?}", rep.result);
    }
}

#[test]
fn directed_lengths() {
    let opts = LevelOptions::default();
    let l = vec![constructions::lattice2()];
    let rep = directed_jonsson_length(&l, &opts).unwrap();
    assert_eq!(rep.exact(), Some(2));
    assert_chain(&l, &rep);
    let t = vec![constructions::trivial()];
    assert_eq!(directed_jonsson_length(&t, &opts).unwrap().exact(), Some(0));
    let g3 = constructions::generators_nhalf(3).unwrap();
    let rep = directed_jonsson_length(&g3, &opts).unwrap();
    assert!(rep.exact().is_some());
    assert_chain(&g3, &rep);
}

#[test]
fn day_levels() {
    let opts = LevelOptions::default();
    let z2 = vec![constructions::z2_maltsev()];
    let rep = day_level(&z2, &opts).unwrap();
    assert_eq!(rep.exact(), Some(2));
    assert_chain(&z2, &rep);
    assert_eq!(day_level(&[constructions::trivial()], &opts).unwrap().exact(), Some(0));

    let g3 = constructions::generators_nhalf(3).unwrap();
    let rep = day_level(&g3, &opts.with_max_k(4).with_upper_bound(4)).unwrap();
    match rep.result {
        LevelResult::Exact(k) => {
            assert!(k == 3 || k == 4);
            assert_chain(&g3, &rep);
        }
        LevelResult::Interval { hi, .. } => assert_eq!(hi, Some(4)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn jonsson_level_is_monotone_in_generators() {
    let opts = LevelOptions::default();
    let lat = constructions::lattice2();
    // The 2-element majority algebra and the median-of-lattice reduct share a signature.
    let maj = FiniteAlgebra::from_fns("M", 2, vec![("m", 3, &|a: &[Elem]| (a[0] & a[1]) | (a[1] & a[2]) | (a[0] & a[2]))]).unwrap();
    let first = FiniteAlgebra::from_fns("F", 2, vec![("m", 3, &|a: &[Elem]| a[0])]).unwrap();
    let z = constructions::z2_maltsev();
    let zm = z.clone().with_name("Z");
    let zm = FiniteAlgebra::new("Z", 2, vec![("m".into(), 3, zm.table(0).to_vec())]).unwrap();
    let level = |g: &[FiniteAlgebra]| match jonsson_level(g, &opts).unwrap().result {
        LevelResult::Exact(k) => k,
        _ => usize::MAX,
    };
    for pair in [[maj.clone(), first.clone()], [maj.clone(), zm.clone()], [first, zm]] {
        let both = level(&pair);
        assert!(both >= level(&pair[..1]) && both >= level(&pair[1..]));
    }
    assert_eq!(level(std::slice::from_ref(&lat)), 2);
}

#[test]
fn level_identity_coherence() {
    for gens in [
        vec![constructions::lattice2()],
        constructions::generators_nhalf(3).unwrap(),
    ] {
        let rep = jonsson_level(&gens, &LevelOptions::default()).unwrap();
        let k = rep.exact().unwrap();
        let holds = identity_catalog("distributivity", &[k]).unwrap();
        for a in &gens {
            let fail = search_identity_failure(a, &holds.lhs, &holds.rhs, SearchLimits::default()).unwrap();
            assert!(fail.is_none(), "{}", a.name());
        }
        let f3 = build_free_algebra(&gens, 3, Limits::default()).unwrap().to_algebra().unwrap();
        let weaker = identity_catalog("distributivity", &[k - 1]).unwrap();
        let fail = search_identity_failure(&f3, &weaker.lhs, &weaker.rhs, SearchLimits::default()).unwrap();
        assert!(fail.is_some(), "level {k} but the {}-identity holds in F(3)", k - 1);
    }
}

#[test]
fn diamond_condition_at_three() {
    let g3 = constructions::generators_nhalf(3).unwrap();
    let rep = diamond_condition(&g3, 3, &LevelOptions::default()).unwrap();
    assert_eq!(rep.holds, Some(true));
}

#[test]
fn sequential_and_parallel_agree() {
    let g3 = constructions::generators_nhalf(3).unwrap();
    let par = LevelOptions::default();
    let seq = par.with_limits(Limits::default().with_exec(ualg_core::Exec::Sequential));
    assert_eq!(jonsson_level(&g3, &par).unwrap(), jonsson_level(&g3, &seq).unwrap());
    let a = build_free_algebra(&g3, 3, par.limits).unwrap();
    let b = build_free_algebra(&g3, 3, seq.limits).unwrap();
    assert_eq!(
        (0..a.len()).map(|e| (a.values(e), a.witness(e))).collect::<Vec<_>>(),
        (0..b.len()).map(|e| (b.values(e), b.witness(e))).collect::<Vec<_>>()
    );
}
