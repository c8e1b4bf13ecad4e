use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use ualg_core::algebra::closure::Limits;
use ualg_core::algebra::equations::{check_suite_with, Equation, EquationSuite, SuiteReport};
use ualg_core::algebra::io::{parse_algebras, write_algebra, write_algebras};
use ualg_core::constructions::suite_by_name;
use ualg_core::maltsev::linear::witness_binding;
use ualg_core::maltsev::{
    build_free_algebra, day_level, directed_jonsson_length, jonsson_level, solve_linear_spec, LevelOptions,
    LevelReport, LevelResult, LinearTermSpec, SolveOutcome, SolveReport,
};
use ualg_core::relations::{
    all_congruences, identity_catalog, parse_identity, parse_identity_file, search_identity_failure, RelExpr,
    SearchLimits,
};
use ualg_core::{Exec, FiniteAlgebra, Term};

use crate::builtins::{builtin, builtin_op_term, BUILTINS};
use crate::error::{usage, CliError, CliResult};
use crate::{
    reproduce, Budget, Cli, Command, Inputs, LevelKindArg, Output, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK,
};

pub(crate) fn dispatch(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Check {
            inputs,
            suite,
            equations,
            eq_file,
            bindings,
        } => check(inputs, suite.as_deref(), equations, eq_file.as_deref(), bindings),
        Command::Solve {
            inputs,
            nu,
            half_nu,
            skew_edge,
            pixley,
            maltsev,
            spec,
            budget,
        } => {
            let spec = match (nu, half_nu, skew_edge, spec) {
                (Some(n), ..) => {
                    at_least("--nu", *n, 3)?;
                    LinearTermSpec::nu(*n)
                }
                (_, Some(n), ..) => {
                    at_least("--half-nu", *n, 2)?;
                    LinearTermSpec::half_nu(*n)
                }
                (_, _, Some(n), _) => {
                    at_least("--skew-edge", *n, 1)?;
                    LinearTermSpec::skew_edge(*n)
                }
                (_, _, _, Some(path)) => LinearTermSpec::parse(&read(path)?).map_err(|e| file_err(path, e))?,
                _ if *pixley => LinearTermSpec::pixley(),
                _ if *maltsev => LinearTermSpec::maltsev(),
                _ => return Err(usage("choose a condition: --nu, --half-nu, --skew-edge, --pixley, --maltsev or --spec")),
            };
            solve(inputs, &spec, budget)
        }
        Command::Level {
            inputs,
            kind,
            max_k,
            upper_bound,
            budget,
        } => {
            let mut opts = LevelOptions::default().with_limits(limits(budget));
            opts.max_k = *max_k;
            opts.upper_bound = *upper_bound;
            level(inputs, *kind, &opts)
        }
        Command::Free {
            inputs,
            rank,
            as_algebra,
            budget,
        } => free(inputs, *rank, *as_algebra, budget),
        Command::Con { inputs } => con(inputs),
        Command::Identity {
            inputs,
            name,
            expr,
            file,
            max_bindings,
        } => identity(inputs, name.as_deref(), expr.as_deref(), file.as_deref(), *max_bindings),
        Command::Build { names, list } => build(names, *list),
        Command::Reproduce {
            n,
            include,
            seed,
            budget,
        } => reproduce::run(*n, include, *seed, limits(budget), cli.timings),
    }
}

fn at_least(flag: &str, n: usize, min: usize) -> CliResult<()> {
    if n < min {
        return Err(usage(format!("{flag} needs a value of at least {min}, got {n}")));
    }
    Ok(())
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn file_err(path: &Path, source: ualg_core::Error) -> CliError {
    CliError::File {
        path: path.to_path_buf(),
        source,
    }
}

pub(crate) fn limits(b: &Budget) -> Limits {
    let mut l = Limits::default();
    if let Some(t) = b.tuple_budget {
        l.tuple_budget = t;
    }
    if let Some(e) = b.element_budget {
        l.element_budget = e;
    }
    if b.sequential {
        l.exec = Exec::Sequential;
    }
    l
}

fn load(inputs: &Inputs) -> CliResult<Vec<FiniteAlgebra>> {
    let mut algs = Vec::new();
    for path in &inputs.files {
        algs.extend(parse_algebras(&read(path)?).map_err(|e| file_err(path, e))?);
    }
    for spec in &inputs.builtins {
        algs.extend(builtin(spec)?);
    }
    if algs.is_empty() {
        return Err(usage("no algebras given (pass files or --builtin NAME)"));
    }
    Ok(algs)
}

fn names(algs: &[FiniteAlgebra]) -> Vec<String> {
    algs.iter().map(|a| a.name().to_string()).collect()
}

fn parse_binding(text: &str) -> CliResult<(String, Term)> {
    let (name, def) = text
        .split_once('=')
        .ok_or_else(|| usage(format!("binding `{text}` must have the form NAME=TERM")))?;
    let def = def.trim();
    let term = match def.strip_prefix("@builtin:") {
        Some(spec) => builtin_op_term(spec)?,
        None => Term::parse(def)?,
    };
    Ok((name.trim().to_string(), term))
}

fn equations_from_file(path: &Path) -> CliResult<Vec<Equation>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, body) = match line.split_once(':') {
            Some((n, b)) if !n.contains('(') && !n.contains('=') => (n.trim().to_string(), b),
            _ => (format!("line{}", i + 1), line),
        };
        let eq = Equation::parse(name, body).map_err(|e| match e {
            ualg_core::Error::Parse { col, msg, .. } => file_err(
                path,
                ualg_core::Error::Parse {
                    line: i + 1,
                    col,
                    msg,
                },
            ),
            other => file_err(path, other),
        })?;
        out.push(eq);
    }
    Ok(out)
}

fn describe_failure(eq: &Equation, report_eq: &str, algs: &[FiniteAlgebra], c: &ualg_core::algebra::equations::Counterexample) -> String {
    let assignment: Vec<String> = c
        .assignment
        .0
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{}={v}", eq.vars.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))))
        .collect();
    format!(
        "{report_eq}: fails in {} at {} (lhs {}, rhs {})",
        algs[c.algebra].name(),
        assignment.join(", "),
        c.lhs,
        c.rhs
    )
}

fn check(
    inputs: &Inputs,
    suite: Option<&str>,
    equations: &[String],
    eq_file: Option<&Path>,
    bindings: &[String],
) -> CliResult<Output> {
    let algs = load(inputs)?;
    let mut eqs = Vec::new();
    let mut name = String::from("equations");
    if let Some(s) = suite {
        let named = suite_by_name(s)?;
        name = named.name.clone();
        eqs.extend(named.equations);
    }
    for (i, text) in equations.iter().enumerate() {
        eqs.push(Equation::parse(format!("eq{}", i + 1), text)?);
    }
    if let Some(path) = eq_file {
        eqs.extend(equations_from_file(path)?);
    }
    if eqs.is_empty() {
        return Err(usage("nothing to check: pass --suite, --eq or --eq-file"));
    }
    let binds = bindings
        .iter()
        .map(|b| parse_binding(b))
        .collect::<CliResult<HashMap<_, _>>>()?;
    let suite = EquationSuite::new(name, eqs);
    let report = check_suite_with(&algs, &suite, &binds, Exec::default())?;
    Ok(render_suite(&algs, &suite, &report))
}

fn render_suite(algs: &[FiniteAlgebra], suite: &EquationSuite, report: &SuiteReport) -> Output {
    let mut text = format!("suite {} on {}\n", report.suite, names(algs).join(", "));
    for (eq, r) in suite.equations.iter().zip(&report.results) {
        match r.check.counterexample() {
            None => writeln!(text, "  ok    {}: {}", r.name, r.equation).unwrap(),
            Some(c) => {
                let line = describe_failure(eq, &r.equation, algs, c);
                writeln!(text, "  FAIL  {}: {line}", r.name).unwrap();
            }
        }
    }
    let holds = report.holds();
    writeln!(text, "{}", if holds { "holds" } else { "counterexample found" }).unwrap();
    Output {
        text,
        json: json!({ "algebras": names(algs), "holds": holds, "report": report }),
        code: if holds { EXIT_OK } else { EXIT_NEGATIVE },
    }
}

fn solve(inputs: &Inputs, spec: &LinearTermSpec, budget: &Budget) -> CliResult<Output> {
    let algs = load(inputs)?;
    let report = solve_linear_spec(&algs, spec, limits(budget))?;
    let mut text = format!("condition {} on {}\n", spec.unknown, names(&algs).join(", "));
    let mut verified = None;
    let code = match &report.outcome {
        SolveOutcome::Found { term, depth } => {
            let check = check_suite_with(&algs, &spec.to_suite(), &witness_binding(spec, term), Exec::default())?;
            verified = Some(check.holds());
            writeln!(text, "found (depth {depth}): {term}").unwrap();
            writeln!(text, "verified: {}", if check.holds() { "yes" } else { "NO" }).unwrap();
            EXIT_OK
        }
        SolveOutcome::NoneExists => {
            writeln!(text, "none").unwrap();
            EXIT_NEGATIVE
        }
        SolveOutcome::Inconclusive { reason } => {
            writeln!(text, "inconclusive: {reason}").unwrap();
            EXIT_INCONCLUSIVE
        }
    };
    write_solve_stats(&mut text, &report);
    Ok(Output {
        text,
        json: json!({ "algebras": names(&algs), "spec": spec, "report": report, "verified": verified }),
        code,
    })
}

fn write_solve_stats(text: &mut String, r: &SolveReport) {
    let s = &r.stats;
    writeln!(
        text,
        "stats: {} coordinates, {} constraints, {} elements, {} tuples",
        s.coordinates, s.constraints, s.elements, s.tuples_evaluated
    )
    .unwrap();
}

fn level(inputs: &Inputs, kind: LevelKindArg, opts: &LevelOptions) -> CliResult<Output> {
    let algs = load(inputs)?;
    let report = match kind {
        LevelKindArg::Distributivity => jonsson_level(&algs, opts)?,
        LevelKindArg::Modularity => day_level(&algs, opts)?,
        LevelKindArg::Directed => directed_jonsson_length(&algs, opts)?,
    };
    let text = format!("algebras: {}\n{}", names(&algs).join(", "), render_level(&report));
    Ok(Output {
        text,
        json: json!({ "algebras": names(&algs), "report": report }),
        code: level_code(&report.result),
    })
}

pub(crate) fn level_code(r: &LevelResult) -> i32 {
    match r {
        LevelResult::Exact(_) => EXIT_OK,
        LevelResult::NoneWithin { .. } => EXIT_NEGATIVE,
        LevelResult::Interval { .. } => EXIT_INCONCLUSIVE,
    }
}

pub(crate) fn render_level(r: &LevelReport) -> String {
    let mut text = format!("{} level: {}\n", r.kind.name(), r.result);
    if let Some(w) = &r.witness {
        for (i, t) in w.iter().enumerate() {
            writeln!(text, "  t{i} = {t}").unwrap();
        }
    }
    let s = &r.stats;
    writeln!(
        text,
        "free algebra: rank {}, {} elements{}",
        s.free_rank,
        s.free_size,
        if s.free_complete { "" } else { " (partial)" }
    )
    .unwrap();
    if let Some(note) = &r.note {
        writeln!(text, "note: {note}").unwrap();
    }
    text
}

fn free(inputs: &Inputs, rank: usize, as_algebra: bool, budget: &Budget) -> CliResult<Output> {
    let algs = load(inputs)?;
    let f = build_free_algebra(&algs, rank, limits(budget))?;
    if as_algebra {
        let alg = f.to_algebra()?;
        return Ok(Output {
            text: write_algebra(&alg),
            json: json!({ "algebra": write_algebra(&alg) }),
            code: EXIT_OK,
        });
    }
    let mut text = format!("free algebra of rank {rank} over {}: {} elements\n", names(&algs).join(", "), f.len());
    let mut elems = Vec::new();
    for e in 0..f.len() {
        let w = f.witness(e);
        writeln!(text, "  {e}: {w}").unwrap();
        elems.push(json!({ "id": e, "witness": w.to_string(), "values": f.values(e) }));
    }
    Ok(Output {
        text,
        json: json!({ "algebras": names(&algs), "rank": rank, "size": f.len(), "elements": elems }),
        code: EXIT_OK,
    })
}

fn con(inputs: &Inputs) -> CliResult<Output> {
    let algs = load(inputs)?;
    let [alg] = &algs[..] else {
        return Err(usage(format!("`con` takes one algebra, got {}", algs.len())));
    };
    let cons = all_congruences(alg)?;
    let mut text = format!("{}: {} congruences\n", alg.name(), cons.len());
    let mut list = Vec::new();
    for (i, c) in cons.iter().enumerate() {
        let below = |j: usize, k: usize| j != k && cons[j].leq(&cons[k]);
        let covers: Vec<usize> = (0..cons.len())
            .filter(|&j| below(j, i) && !(0..cons.len()).any(|k| below(j, k) && below(k, i)))
            .collect();
        let blocks: Vec<String> = c
            .parts()
            .iter()
            .map(|p| p.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        writeln!(text, "  {i}: |{}|  covers {:?}", blocks.join("|"), covers).unwrap();
        list.push(json!({ "id": i, "blocks": c.parts(), "covers": covers }));
    }
    Ok(Output {
        text,
        json: json!({ "algebra": alg.name(), "congruences": list }),
        code: EXIT_OK,
    })
}

fn identity(
    inputs: &Inputs,
    name: Option<&str>,
    expr: Option<&str>,
    file: Option<&Path>,
    max_bindings: Option<u64>,
) -> CliResult<Output> {
    let algs = load(inputs)?;
    let mut ids: Vec<(String, RelExpr, RelExpr)> = Vec::new();
    if let Some(spec) = name {
        let (n, params) = match spec.split_once(':') {
            Some((n, p)) => (n, p),
            None => (spec, ""),
        };
        let params = params
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad identity parameter `{s}`"))))
            .collect::<CliResult<Vec<_>>>()?;
        let id = identity_catalog(n, &params)?;
        ids.push((spec.to_string(), id.lhs, id.rhs));
    }
    if let Some(e) = expr {
        let (l, r) = parse_identity(e)?;
        ids.push((e.to_string(), l, r));
    }
    if let Some(path) = file {
        for (i, (l, r)) in parse_identity_file(&read(path)?).map_err(|e| file_err(path, e))?.into_iter().enumerate() {
            ids.push((format!("{}#{}", path.display(), i + 1), l, r));
        }
    }
    if ids.is_empty() {
        return Err(usage("pass --name, --expr or --file"));
    }
    let mut lim = SearchLimits::default();
    if let Some(m) = max_bindings {
        lim.max_bindings = m;
    }
    let mut text = String::new();
    let mut results = Vec::new();
    let mut failed = false;
    for alg in &algs {
        for (label, lhs, rhs) in &ids {
            let found = search_identity_failure(alg, lhs, rhs, lim)?;
            match &found {
                None => writeln!(text, "{}: {label}: holds", alg.name()).unwrap(),
                Some(f) => {
                    failed = true;
                    let binding: Vec<String> = f
                        .binding
                        .iter()
                        .map(|(a, c)| {
                            let blocks: Vec<String> = c
                                .parts()
                                .iter()
                                .map(|p| p.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
                                .collect();
                            format!("{a}=|{}|", blocks.join("|"))
                        })
                        .collect();
                    writeln!(
                        text,
                        "{}: {label}: fails at pair ({}, {}) with {}",
                        alg.name(),
                        f.pair.0,
                        f.pair.1,
                        binding.join(" ")
                    )
                    .unwrap();
                }
            }
            results.push(json!({ "algebra": alg.name(), "identity": label, "failure": found }));
        }
    }
    Ok(Output {
        text,
        json: json!({ "results": results }),
        code: if failed { EXIT_NEGATIVE } else { EXIT_OK },
    })
}

fn build(names_: &[String], list: bool) -> CliResult<Output> {
    if list {
        let mut text = String::new();
        for (name, params, about) in BUILTINS {
            let shown = if params.is_empty() { name.to_string() } else { format!("{name}:{params}") };
            writeln!(text, "{shown:<16} {about}").unwrap();
        }
        let json = json!(BUILTINS
            .iter()
            .map(|(n, p, a)| json!({ "name": n, "params": p, "description": a }))
            .collect::<Vec<Value>>());
        return Ok(Output { text, json, code: EXIT_OK });
    }
    if names_.is_empty() {
        return Err(usage("name at least one builtin, or pass --list"));
    }
    let mut algs = Vec::new();
    for n in names_ {
        algs.extend(builtin(n)?);
    }
    let text = write_algebras(&algs);
    Ok(Output {
        json: json!({ "algebras": text }),
        text,
        code: EXIT_OK,
    })
}
