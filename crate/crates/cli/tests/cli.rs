//! End-to-end runs of the command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use ualg_cli::run;

fn ualg(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ualg").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_builtin(dir: &Path, name: &str) -> PathBuf {
    let (code, text, _) = ualg(&["build", name]);
    assert_eq!(code, 0);
    let path = dir.join(format!("{}.alg", name.replace(':', "")));
    fs::write(&path, text).unwrap();
    path
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares with a stored file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

#[test]
fn check_suite_with_builtin_binding() {
    let dir = tempfile::tempdir().unwrap();
    let gnu3 = write_builtin(dir.path(), "Gnu3");
    let (code, out, _) = ualg(&["check", "--suite", "half_nu:3", "--bind", "u=@builtin:Gnu3.u", gnu3.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("holds\n"));
}

#[test]
fn check_reports_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let gnu3 = write_builtin(dir.path(), "Gnu3");
    let (code, out, _) = ualg(&["check", "--eq", "u(x,x,z,z,z)=x", gnu3.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("at x=1, z=0"), "{out}");
}

#[test]
fn check_equation_file() {
    let dir = tempfile::tempdir().unwrap();
    let eqs = dir.path().join("eqs.txt");
    fs::write(&eqs, "# absorption\nabs: join(x, meet(x, y)) = x\nmeet(x,y) = meet(y,x)\n").unwrap();
    let (code, out, _) = ualg(&["check", "--eq-file", eqs.to_str().unwrap(), "--builtin", "Lattice2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("abs:") && out.contains("line3:"));
    fs::write(&eqs, "ok: meet(x,y) = meet(y,x)\nbad: meet(x,y = x\n").unwrap();
    let (code, _, err) = ualg(&["check", "--eq-file", eqs.to_str().unwrap(), "--builtin", "Lattice2"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn input_errors_exit_1() {
    let (code, _, err) = ualg(&["check", "--eq", "u(x)=x", "/nonexistent/file.alg"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/file.alg"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    fs::write(&bad, "algebra A\nsize 2\nop f 2\n0 1\n1\n").unwrap();
    let (code, _, err) = ualg(&["solve", "--pixley", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line"), "{err}");
    assert_eq!(ualg(&["solve", "--builtin", "Lattice2"]).0, 1);
    assert_eq!(ualg(&["frobnicate"]).0, 1);
    assert_eq!(ualg(&["solve", "--nu", "3"]).0, 1);
    assert_eq!(ualg(&["--help"]).0, 0);
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let gnu3 = write_builtin(dir.path(), "Gnu3");
    let bool2 = write_builtin(dir.path(), "Bool2");
    let (code, out, _) = ualg(&["solve", "--nu", "3", gnu3.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("none"));
    let (code, out, _) = ualg(&["solve", "--nu", "4", gnu3.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("found (depth 1): (u x1 x1 x2 x3 x4)") && out.contains("verified: yes"), "{out}");
    assert_eq!(ualg(&["solve", "--pixley", bool2.to_str().unwrap()]).0, 0);
    let (code, out, _) = ualg(&["solve", "--nu", "4", "--builtin", "Nhalf:4"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("inconclusive"));
}

#[test]
fn solve_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("maj.spec");
    fs::write(&spec, "unknown m 3\neq m(x,x,y) = x\neq m(x,y,x) = x\neq m(y,x,x) = x\n").unwrap();
    let (code, out, _) = ualg(&["solve", "--spec", spec.to_str().unwrap(), "--builtin", "Lattice2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(ualg(&["solve", "--spec", spec.to_str().unwrap(), "--builtin", "Semilattice2"]).0, 2);
}

#[test]
fn level_examples() {
    let dir = tempfile::tempdir().unwrap();
    let lat = write_builtin(dir.path(), "Lattice2");
    let (code, out, _) = ualg(&["level", "--kind", "distributivity", "--builtin", "Nhalf:3"]);
    assert_eq!(code, 0);
    assert!(out.contains("distributivity level: exactly 3"));
    let (code, out, _) = ualg(&["level", "--kind", "distributivity", lat.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("exactly 2") && out.contains("18 elements"));
    let (code, out, _) = ualg(&["level", "--kind", "modularity", "--builtin", "Z2maltsev"]);
    assert_eq!(code, 0);
    assert!(out.contains("modularity level: exactly 2"));
    let (code, out, _) = ualg(&["level", "--kind", "distributivity", "--builtin", "Semilattice2", "--max-k", "4"]);
    assert_eq!(code, 2, "{out}");
    let (code, out, _) = ualg(&["level", "--kind", "modularity", "--builtin", "Nhalf:4", "--upper-bound", "6"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("in [2, 6]"));
}

#[test]
fn free_and_con() {
    let (code, out, _) = ualg(&["free", "--rank", "3", "--builtin", "Lattice2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("free algebra of rank 3 over Lattice2: 18 elements"));
    let (code, alg, _) = ualg(&["free", "--rank", "2", "--as-algebra", "--builtin", "Lattice2"]);
    assert_eq!(code, 0);
    assert!(alg.contains("size 4"));
    let (code, out, _) = ualg(&["con", "--builtin", "Bool4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Bool4: 4 congruences"), "{out}");
    assert_eq!(ualg(&["con", "--builtin", "Bool2", "--builtin", "Lattice2"]).0, 1);
}

#[test]
fn identity_search() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z2z2.alg");
    let table: Vec<String> = (0..64u32).map(|i| ((i >> 4) ^ ((i >> 2) & 3) ^ (i & 3)).to_string()).collect();
    fs::write(&z, format!("algebra Z2xZ2\nsize 4\nop p 3\n{}\n", table.join(" "))).unwrap();
    let path = z.to_str().unwrap();
    let (code, out, _) = ualg(&["identity", "--name", "distributivity:2", path]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("fails at pair"));
    let (code, out, _) = ualg(&["identity", "--name", "modularity:2", path]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = ualg(&["identity", "--expr", "a(b o g) <= ab o ag", "--builtin", "Lattice2"]);
    assert_eq!(code, 0);
}

#[test]
fn build_list_and_round_trip() {
    let (code, out, _) = ualg(&["build", "--list"]);
    assert_eq!(code, 0);
    assert!(out.contains("Njm:j,m"));
    let dir = tempfile::tempdir().unwrap();
    let path = write_builtin(dir.path(), "Nhalf:4");
    let (code, out, _) = ualg(&["check", "--suite", "half_nu:4", "--bind", "u=(u x1 x2 x3 x4 x5 x6)", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("on Gnu4, N3,5+"));
}

#[test]
fn reproduce_golden_and_deterministic() {
    let (code, text, _) = ualg(&["reproduce", "--n", "3"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("PASS [distributivity-level]") && text.ends_with("verdict: pass\n"));
    assert_golden("reproduce_n3.txt", &text);
    let (_, again, _) = ualg(&["reproduce", "--n", "3"]);
    assert_eq!(text, again);
    let (code, json, _) = ualg(&["reproduce", "--n", "3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_golden("reproduce_n3.json", &json);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn reproduce_options() {
    let (code, out, _) = ualg(&["reproduce", "--n", "3", "--include", "day-level", "--timings"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS [day-level]") && out.contains("elapsed:"));
    assert_eq!(ualg(&["reproduce", "--n", "2"]).0, 1);
    assert_eq!(ualg(&["reproduce", "--include", "bogus"]).0, 1);
    let (code, out, _) = ualg(&["reproduce", "--n", "5", "--seed", "11"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("seed 11") && out.contains("SKIP (budget"));
}
