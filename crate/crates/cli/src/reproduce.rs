//! The claim-by-claim report for the half near-unanimity varieties.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;
use ualg_core::algebra::closure::Limits;
use ualg_core::algebra::equations::{chain_bindings, check_suite, EquationSuite};
use ualg_core::algebra::subuniverse::{is_subuniverse, CheckConfig, CheckMode};
use ualg_core::algebra::ProductView;
use ualg_core::constructions::translations::{half_from_nu, half_from_pixley, nu_from_half, pixley_from_half};
use ualg_core::constructions::{self, algebras, suites};
use ualg_core::maltsev::{
    day_level, diamond_condition, directed_jonsson_length, has_nu_term, jonsson_level, LevelOptions, LevelReport,
    LevelResult, SolveOutcome,
};
use ualg_core::{FiniteAlgebra, Term};

use crate::error::{usage, CliResult};
use crate::{Output, EXIT_NEGATIVE, EXIT_OK};

const OPTIONAL: [&str; 3] = ["day-level", "directed", "diamond"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub statement: String,
    #[serde(flatten)]
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproReport {
    pub n: usize,
    pub generators: Vec<String>,
    pub claims: Vec<Claim>,
    pub verdict: &'static str,
}

type Check = CliResult<(Status, String)>;

fn suite_status(gens: &[FiniteAlgebra], suite: &EquationSuite, bindings: &HashMap<String, Term>) -> Check {
    let r = check_suite(gens, suite, bindings)?;
    let first = r.failures().next().map(|f| {
        let where_ = f
            .check
            .counterexample()
            .map(|c| format!(" in {} at {:?}", gens[c.algebra].name(), c.assignment.0))
            .unwrap_or_default();
        format!("{} fails{where_}", f.equation)
    });
    Ok(match first {
        None => (Status::Pass, format!("{} equations of {} hold", r.results.len(), suite.name)),
        Some(msg) => (Status::Fail, msg),
    })
}

fn one(name: &str, t: &Term) -> HashMap<String, Term> {
    HashMap::from([(name.to_string(), t.clone())])
}

fn u_n(n: usize) -> Term {
    Term::projection_app(algebras::U, n + 2)
}

fn level_status(r: &LevelReport, expect: Option<usize>, bound: usize) -> (Status, String) {
    let chain = r
        .witness
        .as_ref()
        .map(|w| {
            let shown: Vec<String> = w.iter().map(|t| t.to_string()).collect();
            format!("; chain {}", shown.join(", "))
        })
        .unwrap_or_default();
    let detail = format!("level {}{chain}", r.result);
    let status = match (r.result, expect) {
        (LevelResult::Exact(k), Some(e)) if k != e => Status::Fail,
        (LevelResult::Exact(k), _) if k > bound => Status::Fail,
        (LevelResult::Exact(_), _) => Status::Pass,
        (LevelResult::NoneWithin { .. }, _) => Status::Fail,
        (LevelResult::Interval { .. }, _) => Status::Skipped {
            reason: format!("budget: free algebra of rank {} not fully generated", r.stats.free_rank),
        },
    };
    (status, detail)
}

fn b_closure(n: usize, seed: u64) -> Check {
    let g = algebras::build_gnu(n)?;
    let view = ProductView::power(&g, n)?;
    let b = algebras::subuniverse_b_power(n)?;
    let config = CheckConfig {
        seed,
        ..CheckConfig::default()
    };
    let r = is_subuniverse(&view, &b, config)?;
    let mode = match r.mode {
        CheckMode::Exhaustive { tuples } => format!("exhaustive, {tuples} tuples"),
        CheckMode::Sampled { seed, samples } => format!("sampled, {samples} tuples per operation, seed {seed}"),
    };
    Ok(match r.violation {
        None => (Status::Pass, format!("closed ({mode})")),
        Some(v) => (Status::Fail, format!("{}{:?} = {} leaves B ({mode})", v.op, v.args, v.result)),
    })
}

fn no_nu(gens: &[FiniteAlgebra], n: usize, limits: Limits) -> Check {
    let r = has_nu_term(gens, n, limits)?;
    Ok(match r.outcome {
        SolveOutcome::NoneExists => (Status::Pass, format!("none ({} elements searched)", r.stats.elements)),
        SolveOutcome::Found { term, .. } => (Status::Fail, format!("found {term}")),
        SolveOutcome::Inconclusive { reason } if n == 3 => (Status::Fail, format!("inconclusive: {reason}")),
        SolveOutcome::Inconclusive { reason } => (Status::Skipped { reason: format!("budget: {reason}") }, String::new()),
    })
}

pub(crate) fn run(n: usize, include: &[String], seed: u64, limits: Limits, timings: bool) -> CliResult<Output> {
    if !(3..=8).contains(&n) {
        return Err(usage(format!("reproduce needs 3 <= n <= 8, got {n}")));
    }
    for inc in include {
        if !OPTIONAL.contains(&inc.as_str()) {
            return Err(usage(format!("unknown claim `{inc}` (optional claims: {})", OPTIONAL.join(", "))));
        }
    }
    let gens = algebras::generators_nhalf(n)?;
    let u = u_n(n);
    let opts = LevelOptions::default().with_limits(limits);
    let mut claims = Vec::new();
    let mut add = |id: &'static str, statement: String, f: &mut dyn FnMut() -> Check| -> CliResult<()> {
        let start = Instant::now();
        let (status, detail) = f()?;
        claims.push(Claim {
            id,
            statement,
            status,
            detail,
            elapsed_seconds: timings.then(|| start.elapsed().as_secs_f64()),
        });
        Ok(())
    };

    add(
        "half-nu",
        format!("u is a {n}½-near-unanimity operation on every generator"),
        &mut || suite_status(&gens, &suites::half_nu(n)?, &one("u", &u)),
    )?;
    let v = nu_from_half(&u, n)?;
    add(
        "nu-from-half",
        format!("u(x1,x1,x2,...) is a near-unanimity term of arity {}", n + 1),
        &mut || suite_status(&gens, &suites::nu(n + 1)?, &one("u", &v)),
    )?;
    add(
        "half-from-nu",
        format!("a near-unanimity term of arity {} yields a {}½-near-unanimity term", n + 1, n + 1),
        &mut || suite_status(&gens, &suites::half_nu(n + 1)?, &one("u", &half_from_nu(&v, n + 1)?)),
    )?;
    add(
        "b-subuniverse",
        format!("B = {{0,1}}^{n} minus (1,...,1) is a subuniverse of (G^{{nu,{n}}})^{n}"),
        &mut || b_closure(n, seed),
    )?;
    add(
        "no-nu",
        format!("there is no near-unanimity term of arity {n}"),
        &mut || no_nu(&gens, n, limits),
    )?;
    add(
        "jonsson-chain",
        format!("the explicit Jónsson chain shows {}-distributivity", 2 * n - 3),
        &mut || {
            let t = constructions::ipp_jonsson_terms(n)?;
            suite_status(&gens, &suites::jonsson(2 * n - 3)?, &chain_bindings("t", &t))
        },
    )?;
    add(
        "day-chain",
        format!("the explicit Day chain shows {}-modularity", 2 * n - 2),
        &mut || {
            let t = constructions::ippm_day_terms(n)?;
            suite_status(&gens, &suites::day(2 * n - 2)?, &chain_bindings("t", &t))
        },
    )?;
    add(
        "directed-gumm",
        format!("the odd chain members give {} directed Gumm term(s) and a final term q", n - 2),
        &mut || {
            let g = constructions::ipp_directed_gumm_terms(n)?;
            let mut b: HashMap<String, Term> =
                g[..n - 2].iter().enumerate().map(|(i, t)| (format!("d{}", i + 1), t.clone())).collect();
            b.insert("q".into(), g[n - 2].clone());
            suite_status(&gens, &suites::directed_gumm(n - 2)?, &b)
        },
    )?;
    add(
        "uu",
        "u satisfies the uu equation system".to_string(),
        &mut || suite_status(&gens, &suites::uu(n)?, &one("u", &u)),
    )?;
    add(
        "skew-edge",
        format!("u and the padded Maltsev term of Z2 are skew-edge terms of arity {}", n + 2),
        &mut || {
            let (s, d) = suite_status(&gens, &suites::skew_edge(n)?, &one("u", &u))?;
            if s != Status::Pass {
                return Ok((s, d));
            }
            let z = vec![constructions::z2_maltsev()];
            suite_status(&z, &suites::skew_edge(n)?, &one("u", &Term::app_vars("p", &[1, 2, 3])))
        },
    )?;
    add(
        "pixley",
        "on the two-element Boolean algebra a Pixley term and a 2½-near-unanimity term translate into each other"
            .to_string(),
        &mut || {
            let b = vec![constructions::bool2()];
            let t = Term::parse("join(meet(x1,neg(x2)),join(meet(x1,x3),meet(neg(x2),x3)))")?;
            let half = half_from_pixley(&t)?;
            let (s, d) = suite_status(&b, &suites::half_nu(2)?, &one("u", &half))?;
            if s != Status::Pass {
                return Ok((s, d));
            }
            suite_status(&b, &suites::pixley(), &one("t", &pixley_from_half(&half)?))
        },
    )?;
    let bound = 2 * n - 3;
    add(
        "distributivity-level",
        format!("the least Jónsson level is exactly {bound}"),
        &mut || {
            let r = jonsson_level(&gens, &opts.with_upper_bound(bound))?;
            Ok(level_status(&r, Some(bound), bound))
        },
    )?;
    if include.iter().any(|i| i == "day-level") {
        let hi = 2 * n - 2;
        add(
            "day-level",
            format!("the least Day level is at most {hi}"),
            &mut || {
                let r = day_level(&gens, &opts.with_upper_bound(hi))?;
                Ok(level_status(&r, None, hi))
            },
        )?;
    }
    if include.iter().any(|i| i == "directed") {
        add(
            "directed-level",
            "the variety has directed Jónsson terms".to_string(),
            &mut || {
                let r = directed_jonsson_length(&gens, &opts)?;
                Ok(level_status(&r, None, usize::MAX))
            },
        )?;
    }
    if include.iter().any(|i| i == "diamond") {
        add(
            "diamond",
            format!("a near-unanimity term of arity {} together with Jónsson terms t0..t{bound}", n + 1),
            &mut || {
                let r = diamond_condition(&gens, n, &opts)?;
                Ok(match r.holds {
                    Some(true) => (Status::Pass, format!("level {}", r.level.result)),
                    Some(false) => (Status::Fail, format!("level {}", r.level.result)),
                    None => (Status::Skipped { reason: "budget".into() }, String::new()),
                })
            },
        )?;
    }

    let failed = claims.iter().any(|c| c.status == Status::Fail);
    let report = ReproReport {
        n,
        generators: gens.iter().map(|a| a.name().to_string()).collect(),
        claims,
        verdict: if failed { "fail" } else { "pass" },
    };
    Ok(Output {
        text: render(&report),
        json: json!(report),
        code: if failed { EXIT_NEGATIVE } else { EXIT_OK },
    })
}

fn render(r: &ReproReport) -> String {
    let mut text = format!("n = {}, generators: {}\n", r.n, r.generators.join(", "));
    for c in &r.claims {
        let tag = match &c.status {
            Status::Pass => "PASS".to_string(),
            Status::Fail => "FAIL".to_string(),
            Status::Skipped { reason } => format!("SKIP ({reason})"),
        };
        write!(text, "{tag} [{}] {}", c.id, c.statement).unwrap();
        if !c.detail.is_empty() {
            write!(text, ": {}", c.detail).unwrap();
        }
        if let Some(s) = c.elapsed_seconds {
            write!(text, " ({s:.3}s)").unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "verdict: {}", r.verdict).unwrap();
    text
}
