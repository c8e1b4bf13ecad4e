//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its elapsed time and limit; the process fails if any criterion does.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use ualg_core::algebra::closure::Limits;
use ualg_core::algebra::equations::{chain_bindings, check_suite, EquationSuite};
use ualg_core::algebra::subuniverse::{is_subuniverse, CheckConfig, CheckMode};
use ualg_core::algebra::term::eval_term;
use ualg_core::algebra::ProductView;
use ualg_core::constructions::translations::{half_from_nu, half_from_pixley, nu_from_half, pixley_from_half};
use ualg_core::constructions::{self, algebras, suites};
use ualg_core::maltsev::{
    build_free_algebra, day_level, has_nu_term, has_skew_edge_term, jonsson_level, LevelOptions, SolveOutcome,
};
use ualg_core::relations::{all_congruences, identity_catalog, search_identity_failure, SearchLimits};
use ualg_core::{Assignment, Elem, FiniteAlgebra, Term};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn u_n(n: usize) -> Term {
    Term::projection_app(algebras::U, n + 2)
}

fn suite_holds(gens: &[FiniteAlgebra], suite: &EquationSuite, bindings: &HashMap<String, Term>) -> Result<(), String> {
    let r = check_suite(gens, suite, bindings).map_err(|e| e.to_string())?;
    let first = r.failures().next().map(|f| format!("{}: {} fails", suite.name, f.equation));
    first.map_or(Ok(()), Err)
}

fn one(name: &str, t: &Term) -> HashMap<String, Term> {
    HashMap::from([(name.to_string(), t.clone())])
}

fn c1() -> Outcome {
    for n in 3..=6 {
        let g = vec![algebras::build_gnu(n).map_err(|e| e.to_string())?];
        suite_holds(&g, &suites::half_nu(n).unwrap(), &one("u", &u_n(n)))?;
    }
    Ok("G^{nu,n} is half-NU for n = 3..6".into())
}

fn c2() -> Outcome {
    let mut count = 0;
    for m in 5..=8 {
        let n = m - 1;
        for j in 3..=algebras::ell(m) {
            let a = vec![algebras::build_njm_plus(j, m).map_err(|e| e.to_string())?];
            for suite in [
                suites::half_nu(n),
                suites::nu_skip2(n),
                suites::ignores_second(n),
                suites::two_exceptions(n),
            ] {
                suite_holds(&a, &suite.unwrap(), &one("u", &u_n(n)))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} algebras N^{{j,m,+}} checked"))
}

fn c3() -> Outcome {
    for n in 3..=6 {
        let gens = algebras::generators_nhalf(n).map_err(|e| e.to_string())?;
        let v = nu_from_half(&u_n(n), n).map_err(|e| e.to_string())?;
        suite_holds(&gens, &suites::nu(n + 1).unwrap(), &one("u", &v))?;
        let w = half_from_nu(&v, n + 1).map_err(|e| e.to_string())?;
        suite_holds(&gens, &suites::half_nu(n + 1).unwrap(), &one("u", &w))?;
    }
    let b = vec![constructions::bool2()];
    let t = Term::parse("join(meet(x1,neg(x2)),join(meet(x1,x3),meet(neg(x2),x3)))").unwrap();
    suite_holds(&b, &suites::pixley(), &one("t", &t))?;
    let u = half_from_pixley(&t).map_err(|e| e.to_string())?;
    suite_holds(&b, &suites::half_nu(2).unwrap(), &one("u", &u))?;
    let t2 = pixley_from_half(&u).map_err(|e| e.to_string())?;
    suite_holds(&b, &suites::pixley(), &one("t", &t2))?;
    Ok("translations verified for n = 3..6; Pixley round trip on Bool2".into())
}

fn b_closed(n: usize) -> Result<u64, String> {
    let g = algebras::build_gnu(n).map_err(|e| e.to_string())?;
    let view = ProductView::power(&g, n).map_err(|e| e.to_string())?;
    let b = algebras::subuniverse_b_power(n).map_err(|e| e.to_string())?;
    let r = is_subuniverse(&view, &b, CheckConfig::default()).map_err(|e| e.to_string())?;
    ensure(r.is_closed(), format!("B not closed at n={n}: {:?}", r.violation))?;
    match r.mode {
        CheckMode::Exhaustive { tuples } => Ok(tuples),
        CheckMode::Sampled { .. } => Err(format!("B check at n={n} was sampled")),
    }
}

fn c4a() -> Outcome {
    let tuples = b_closed(3)?;
    ensure(tuples == 7u64.pow(5), format!("expected 7^5 tuples, got {tuples}"))?;
    let g = algebras::generators_nhalf(3).unwrap();
    let rep = has_nu_term(&g, 3, Limits::default()).map_err(|e| e.to_string())?;
    ensure(rep.is_none(), format!("3-ary NU: {:?}", rep.outcome))?;
    Ok(format!("B closed ({tuples} tuples); no 3-ary NU term"))
}

fn c4b() -> Outcome {
    let tuples = b_closed(4)?;
    ensure(tuples == 15u64.pow(6), format!("expected 15^6 tuples, got {tuples}"))?;
    let g = algebras::generators_nhalf(4).unwrap();
    let rep = has_nu_term(&g, 4, Limits::default()).map_err(|e| e.to_string())?;
    let nu = match &rep.outcome {
        SolveOutcome::NoneExists => "none".to_string(),
        SolveOutcome::Inconclusive { reason } => format!("inconclusive ({reason})"),
        SolveOutcome::Found { term, .. } => return Err(format!("4-ary NU term found: {term}")),
    };
    Ok(format!("B closed ({tuples} tuples); 4-ary NU: {nu}"))
}

fn c5() -> Outcome {
    let g = algebras::generators_nhalf(3).unwrap();
    let rep = jonsson_level(&g, &LevelOptions::default()).map_err(|e| e.to_string())?;
    ensure(rep.exact() == Some(3), format!("level {}", rep.result))?;
    ensure(rep.stats.free_size <= 64, format!("|F(3)| = {}", rep.stats.free_size))?;
    let w = rep.witness.as_ref().ok_or("no witness chain")?;
    suite_holds(&g, &suites::jonsson(3).unwrap(), &chain_bindings("t", w))?;
    Ok(format!("level 3, |F(3)| = {}, chain verified", rep.stats.free_size))
}

fn c6() -> Outcome {
    for n in 3..=5 {
        let gens = algebras::generators_nhalf(n).unwrap();
        let t = constructions::ipp_jonsson_terms(n).map_err(|e| e.to_string())?;
        suite_holds(&gens, &suites::jonsson(2 * n - 3).unwrap(), &chain_bindings("t", &t))?;
        let d = constructions::ippm_day_terms(n).map_err(|e| e.to_string())?;
        suite_holds(&gens, &suites::day(2 * n - 2).unwrap(), &chain_bindings("t", &d))?;
    }
    Ok("Jónsson (2n-3) and Day (2n-2) chains for n = 3..5".into())
}

fn c7() -> Outcome {
    for n in 3..=5 {
        let suite = suites::uu(n).unwrap();
        let g = vec![algebras::build_gnu(n).unwrap()];
        suite_holds(&g, &suite, &one("u", &u_n(n)))?;
        for a in algebras::generators_nhalf(n).unwrap() {
            suite_holds(std::slice::from_ref(&a), &suite, &one("u", &u_n(n)))?;
        }
    }
    Ok("uu equations for n = 3..5 on every generator".into())
}

fn c8() -> Outcome {
    let z = vec![constructions::z2_maltsev()];
    let padded = Term::app_vars("p", &[1, 2, 3]);
    suite_holds(&z, &suites::skew_edge(3).unwrap(), &one("u", &padded))?;
    let solved = has_skew_edge_term(&z, 3, Limits::default()).map_err(|e| e.to_string())?;
    let u = solved.term().ok_or("solver found no skew-edge term")?;
    suite_holds(&z, &suites::skew_edge(3).unwrap(), &one("u", u))?;
    let rep = day_level(&z, &LevelOptions::default()).map_err(|e| e.to_string())?;
    ensure(rep.exact() == Some(2), format!("Day level {}", rep.result))?;
    let w = rep.witness.as_ref().ok_or("no Day chain")?;
    suite_holds(&z, &suites::day(2).unwrap(), &chain_bindings("t", w))?;
    Ok("padded Maltsev is skew-edge; Day level 2 with verified chain".into())
}

/// Brute force over all 15 partitions of a 4-element set, independent of the
/// crate's congruence and relation code.
fn z2z2_oracle() -> (usize, bool, bool) {
    type Rel = [[bool; 4]; 4];
    let mut parts = Vec::new();
    for b in 0..=1usize {
        for c in 0..=b + 1 {
            for d in 0..=c.max(b) + 1 {
                parts.push([0, b, c, d]);
            }
        }
    }
    let rel = |p: &[usize; 4]| -> Rel {
        let mut r = [[false; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                r[i][j] = p[i] == p[j];
            }
        }
        r
    };
    let compatible = |r: &Rel| {
        (0..4096).all(|t: usize| {
            let (x, x2, y, y2, z, z2) = (t & 3, t >> 2 & 3, t >> 4 & 3, t >> 6 & 3, t >> 8 & 3, t >> 10 & 3);
            !(r[x][x2] && r[y][y2] && r[z][z2]) || r[x ^ y ^ z][x2 ^ y2 ^ z2]
        })
    };
    let meet = |a: &Rel, b: &Rel| {
        let mut r = [[false; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                r[i][j] = a[i][j] && b[i][j];
            }
        }
        r
    };
    let comp = |a: &Rel, b: &Rel| {
        let mut r = [[false; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                r[i][j] = (0..4).any(|k| a[i][k] && b[k][j]);
            }
        }
        r
    };
    let within = |a: &Rel, b: &Rel| (0..4).all(|i| (0..4).all(|j| !a[i][j] || b[i][j]));
    let cons: Vec<Rel> = parts.iter().map(rel).filter(|r| compatible(r)).collect();
    let mut dist_fails = false;
    let mut mod_fails = false;
    for a in &cons {
        for b in &cons {
            for g in &cons {
                let rhs = comp(&meet(a, b), &meet(a, g));
                dist_fails |= !within(&meet(a, &comp(b, g)), &rhs);
                mod_fails |= !within(&meet(a, &comp(&comp(b, &meet(a, g)), b)), &rhs);
            }
        }
    }
    (cons.len(), dist_fails, mod_fails)
}

fn c9() -> Outcome {
    let table = (0..64u32).map(|i| (i >> 4) ^ ((i >> 2) & 3) ^ (i & 3)).collect();
    let a = FiniteAlgebra::new("Z2xZ2", 4, vec![("p".into(), 3, table)]).map_err(|e| e.to_string())?;
    let (ncons, dist_fails, mod_fails) = z2z2_oracle();
    let ours = all_congruences(&a).map_err(|e| e.to_string())?.len();
    ensure(ours == ncons, format!("{ours} congruences, oracle {ncons}"))?;
    let dist = identity_catalog("distributivity", &[2]).unwrap();
    let modu = identity_catalog("modularity", &[2]).unwrap();
    let d = search_identity_failure(&a, &dist.lhs, &dist.rhs, SearchLimits::default()).map_err(|e| e.to_string())?;
    let m = search_identity_failure(&a, &modu.lhs, &modu.rhs, SearchLimits::default()).map_err(|e| e.to_string())?;
    ensure(d.is_some() && dist_fails, "distributivity(2) should fail in both engine and oracle")?;
    ensure(m.is_none() && !mod_fails, "modularity(2) should hold in both engine and oracle")?;
    Ok(format!("{ncons} congruences; distributivity(2) fails, modularity(2) holds"))
}

fn c10() -> Outcome {
    let l = vec![constructions::lattice2()];
    let mut sizes = Vec::new();
    for k in 2..=3 {
        let f = build_free_algebra(&l, k, Limits::default()).map_err(|e| e.to_string())?;
        let mut ok = 0;
        for e in 0..f.len() {
            let w = f.witness(e);
            let good = f.coordinates().iter().enumerate().all(|(c, (ai, t))| {
                let vals: Vec<Elem> = t.clone();
                eval_term(&l[*ai], &w, &Assignment(vals)).ok() == Some(f.value(e, c))
            });
            ok += good as usize;
        }
        ensure(ok == f.len(), format!("k={k}: {ok}/{} witnesses re-evaluate", f.len()))?;
        sizes.push(f.len());
    }
    ensure(sizes == [4, 18], format!("sizes {sizes:?}"))?;
    Ok("|F(2)| = 4, |F(3)| = 18, all witnesses re-evaluate".into())
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 half-NU on G^{nu,n}", 1, c1),
        ("2 u+ on N^{j,m,+}", 1, c2),
        ("3 translations", 1, c3),
        ("4a B closure and no NU at n=3", 30, c4a),
        ("4b B closure at n=4", 60, c4b),
        ("5 Jónsson level 3", 60, c5),
        ("6 explicit chains", 5, c6),
        ("7 uu equations", 5, c7),
        ("8 skew-edge and Day level", 60, c8),
        ("9 identity oracle on Z2xZ2", 10, c9),
        ("10 free lattices", 10, c10),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; over the time limit")),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("{tag} criterion {name} ({:.2}s / {limit}s): {msg}", took.as_secs_f64());
        failed += outcome.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
