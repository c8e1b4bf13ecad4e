//! Jónsson, directed Jónsson, and Day levels by path search in free algebras.
//!
//! A chain `t_0 = x, t_1, ..., t_k = z` of ternary terms is a set of elements
//! of `F(3)`; every equation of the chain condition says that two chain
//! members agree on a fixed set of coordinates. The shortest chain is
//! therefore a shortest path in a graph on the elements of the free algebra.
//! Alternating chains are found layer by layer: `Reach_i` is the set of
//! elements joined to `x` by a valid chain of length `i` (repeated members
//! allowed), and since each link relation is an equivalence, one grouping pass
//! per layer computes it.

use std::ops::ControlFlow;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::free::{build_free_algebra, build_partial, FreeAlgebra};
use crate::algebra::closure::Limits;
use crate::algebra::{Algebra, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::par;
use crate::relations::identities::search_over;
use crate::relations::{identity_catalog, principal_congruence, Congruence, SearchLimits};
use crate::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelKind {
    Distributivity,
    DirectedDistributivity,
    Modularity,
}

impl LevelKind {
    pub fn name(self) -> &'static str {
        match self {
            LevelKind::Distributivity => "distributivity",
            LevelKind::DirectedDistributivity => "directed-distributivity",
            LevelKind::Modularity => "modularity",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelResult {
    /// The shortest chain has exactly this many links.
    Exact(usize),
    /// No chain with at most `bound` links. When `saturated`, the search
    /// reached a fixed point, so no chain of any length exists.
    NoneWithin { bound: usize, saturated: bool },
    /// The free algebra was not fully generated. `hi` is the shortest chain
    /// found among the generated elements or supplied by the caller.
    Interval { lo: usize, hi: Option<usize> },
}

impl std::fmt::Display for LevelResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LevelResult::Exact(k) => write!(f, "exactly {k}"),
            LevelResult::NoneWithin { saturated: true, .. } => write!(f, "none (search saturated)"),
            LevelResult::NoneWithin { bound, .. } => write!(f, "none <= {bound}"),
            LevelResult::Interval { lo, hi: Some(hi) } => write!(f, "in [{lo}, {hi}]"),
            LevelResult::Interval { lo, hi: None } => write!(f, "at least {lo}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub free_rank: usize,
    pub free_size: usize,
    pub free_complete: bool,
    pub vertices: usize,
    pub layers: usize,
    pub tuples_evaluated: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub kind: LevelKind,
    pub result: LevelResult,
    /// Chain `t_0..t_k` over `x1..x_r`; present for exact results and for
    /// upper bounds found in a partial free algebra.
    pub witness: Option<Vec<Term>>,
    pub stats: LevelStats,
    pub note: Option<String>,
}

impl LevelReport {
    pub fn exact(&self) -> Option<usize> {
        match self.result {
            LevelResult::Exact(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct LevelOptions {
    /// Longest chain searched; defaults to twice the largest arity plus 4.
    pub max_k: Option<usize>,
    pub limits: Limits,
    /// Known upper bound, used when the free algebra is incomplete.
    pub upper_bound: Option<usize>,
}


impl LevelOptions {
    pub fn with_max_k(mut self, k: usize) -> Self {
        self.max_k = Some(k);
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_upper_bound(mut self, hi: usize) -> Self {
        self.upper_bound = Some(hi);
        self
    }
}

pub fn default_max_k(gens: &[FiniteAlgebra]) -> usize {
    let arity = gens
        .iter()
        .flat_map(|a| a.signature().iter().map(|s| s.arity))
        .max()
        .unwrap_or(0);
    2 * arity + 4
}

/// Coordinates and vertex condition of one chain problem on `F(rank)`.
struct ChainProblem {
    rank: usize,
    /// Vertices equal the first variable on tuples satisfying this.
    vertex: fn(&[Elem]) -> bool,
    /// Link tuple patterns for EVEN and ODD links.
    even: fn(&[Elem]) -> bool,
    odd: fn(&[Elem]) -> bool,
}

const JONSSON: ChainProblem = ChainProblem {
    rank: 3,
    vertex: |t| t[0] == t[2],
    even: |t| t[0] == t[1],
    odd: |t| t[1] == t[2],
};

const DAY: ChainProblem = ChainProblem {
    rank: 4,
    vertex: |t| t[0] == t[3] && t[1] == t[2],
    even: |t| t[0] == t[1] && t[2] == t[3],
    odd: |t| t[1] == t[2],
};

fn build(gens: &[FiniteAlgebra], rank: usize, opts: &LevelOptions) -> Result<FreeAlgebra> {
    build_partial(gens, rank, opts.limits, |_, _| ControlFlow::Continue(()))
}

fn vertices(f: &FreeAlgebra, pred: fn(&[Elem]) -> bool, exec: par::Exec) -> Vec<usize> {
    let coords: Vec<(usize, Elem)> = f
        .coordinates()
        .iter()
        .enumerate()
        .filter(|(_, (_, t))| pred(t))
        .map(|(c, (_, t))| (c, t[0]))
        .collect();
    let flags = par::map(exec, (0..f.len()).collect(), |e| {
        coords.iter().all(|&(c, v)| f.value(e, c) == v)
    });
    (0..f.len()).filter(|&e| flags[e]).collect()
}

/// Interned key of each vertex on `coords`.
fn classes(f: &FreeAlgebra, verts: &[usize], coords: &[usize]) -> Vec<u32> {
    let mut ids: FxHashMap<Vec<Elem>, u32> = FxHashMap::default();
    verts
        .iter()
        .map(|&e| {
            let key: Vec<Elem> = coords.iter().map(|&c| f.value(e, c)).collect();
            let next = ids.len() as u32;
            *ids.entry(key).or_insert(next)
        })
        .collect()
}

struct Search {
    /// Chain of vertex indices when found.
    chain: Option<Vec<usize>>,
    layers: usize,
    saturated: bool,
}

fn alternating_search(class: [&[u32]; 2], start: usize, target: usize, max_k: usize) -> Search {
    let n = class[0].len();
    const NONE: usize = usize::MAX;
    let mut layer = vec![NONE; n];
    let mut parent = vec![NONE; n];
    layer[start] = 0;
    let mut reach = vec![start];
    let mut stable = 0;
    for i in 1..=max_k {
        let rel = class[(i - 1) % 2];
        let mut reps: FxHashMap<u32, usize> = FxHashMap::default();
        for &v in &reach {
            reps.entry(rel[v]).or_insert(v);
        }
        let before = reach.len();
        for v in 0..n {
            if layer[v] == NONE {
                if let Some(&p) = reps.get(&rel[v]) {
                    layer[v] = i;
                    parent[v] = p;
                    reach.push(v);
                }
            }
        }
        reach[before..].sort_unstable();
        if layer[target] != NONE {
            let mut chain = vec![0; i + 1];
            let mut cur = target;
            for j in (1..=i).rev() {
                chain[j] = cur;
                if layer[cur] == j {
                    cur = parent[cur];
                }
            }
            chain[0] = cur;
            return Search {
                chain: Some(chain),
                layers: i,
                saturated: false,
            };
        }
        stable = if reach.len() == before { stable + 1 } else { 0 };
        if stable >= 2 {
            return Search {
                chain: None,
                layers: i,
                saturated: true,
            };
        }
    }
    Search {
        chain: None,
        layers: max_k,
        saturated: false,
    }
}

fn stats(f: &FreeAlgebra, verts: usize, layers: usize) -> LevelStats {
    LevelStats {
        free_rank: f.rank(),
        free_size: f.len(),
        free_complete: f.is_complete(),
        vertices: verts,
        layers,
        tuples_evaluated: f.closure().tuples_evaluated(),
    }
}

fn incomplete_note(f: &FreeAlgebra) -> String {
    format!(
        "F({}) generation stopped after {} elements ({}); chains among generated elements only",
        f.rank(),
        f.len(),
        super::free::describe_status(f.closure().status())
    )
}

/// A lower bound for an incomplete search: the level exceeds `k` whenever
/// the `k`-distributive (or `k`-modular) congruence identity fails in some
/// algebra of the variety. Tries `F(3)` with congruences generated by pairs of
/// free generators.
fn identity_lower_bound(
    kind: LevelKind,
    gens: &[FiniteAlgebra],
    below: usize,
    opts: &LevelOptions,
) -> Option<(usize, String)> {
    let name = match kind {
        LevelKind::Distributivity => "distributivity",
        LevelKind::Modularity => "modularity",
        LevelKind::DirectedDistributivity => return None,
    };
    let f3 = build_free_algebra(gens, 3, opts.limits).ok()?;
    let alg = f3.to_algebra().ok()?;
    let g: Vec<Elem> = (1..=3).map(|v| f3.generator(v) as Elem).collect();
    let mut cands: Vec<Congruence> = Vec::new();
    let add = |c: Congruence, cands: &mut Vec<Congruence>| {
        if !cands.contains(&c) {
            cands.push(c);
        }
    };
    let principal: Vec<Congruence> = [(0, 1), (1, 2), (0, 2)]
        .iter()
        .filter_map(|&(i, j)| principal_congruence(&alg, g[i], g[j]).ok())
        .collect();
    for c in &principal {
        add(c.clone(), &mut cands);
    }
    for (i, a) in principal.iter().enumerate() {
        for b in &principal[i + 1..] {
            add(a.join(b), &mut cands);
        }
    }
    add(Congruence::full(alg.size()), &mut cands);
    let limits = SearchLimits {
        exec: opts.limits.exec,
        ..SearchLimits::default()
    };
    for k in (1..below).rev() {
        let id = identity_catalog(name, &[k]).ok()?;
        if let Ok(Some(fail)) = search_over(alg.size(), &cands, &id.lhs, &id.rhs, limits) {
            let note = format!(
                "lower bound: the identity {} fails in F(3) ({} elements) at the pair ({}, {})",
                id.display(),
                alg.size(),
                f3.witness(fail.pair.0),
                f3.witness(fail.pair.1)
            );
            return Some((k + 1, note));
        }
    }
    None
}

fn finish(
    kind: LevelKind,
    f: &FreeAlgebra,
    verts: &[usize],
    search: Search,
    max_k: usize,
    opts: &LevelOptions,
    gens: &[FiniteAlgebra],
) -> LevelReport {
    let witness = search
        .chain
        .as_ref()
        .map(|c| c.iter().map(|&v| f.witness(verts[v])).collect::<Vec<_>>());
    let found = search.chain.as_ref().map(|c| c.len() - 1);
    let st = stats(f, verts.len(), search.layers);
    if f.is_complete() {
        let result = match found {
            Some(k) => LevelResult::Exact(k),
            None => LevelResult::NoneWithin {
                bound: max_k,
                saturated: search.saturated,
            },
        };
        return LevelReport {
            kind,
            result,
            witness,
            stats: st,
            note: None,
        };
    }
    let hi = match (found, opts.upper_bound) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let mut notes = vec![incomplete_note(f)];
    let mut lo = 2;
    if let Some((k, note)) = identity_lower_bound(kind, gens, hi.unwrap_or(max_k + 1), opts) {
        if k > lo {
            lo = k;
            notes.push(note);
        }
    }
    let result = match hi {
        Some(h) if h <= lo && found == hi => LevelResult::Exact(h),
        _ => LevelResult::Interval { lo, hi },
    };
    LevelReport {
        kind,
        result,
        witness: witness.filter(|_| found == hi),
        stats: st,
        note: Some(notes.join("; ")),
    }
}

fn trivial(kind: LevelKind, f: &FreeAlgebra, witness: Vec<Term>) -> LevelReport {
    LevelReport {
        kind,
        result: LevelResult::Exact(0),
        witness: Some(witness),
        stats: stats(f, 1, 0),
        note: Some("the variety is trivial".into()),
    }
}

fn chain_level(
    kind: LevelKind,
    problem: &ChainProblem,
    gens: &[FiniteAlgebra],
    opts: &LevelOptions,
) -> Result<LevelReport> {
    let max_k = opts.max_k.unwrap_or_else(|| default_max_k(gens));
    let f = build(gens, problem.rank, opts)?;
    let x = f.generator(1);
    let z = f.generator(problem.rank);
    if x == z {
        return Ok(trivial(kind, &f, vec![f.witness(x)]));
    }
    let verts = vertices(&f, problem.vertex, opts.limits.exec);
    let pos = |e: usize| verts.binary_search(&e).map_err(|_| Error::InvalidAlgebra("projection is not a chain vertex".into()));
    let (start, target) = (pos(x)?, pos(z)?);
    let even = classes(&f, &verts, &f.coords_where(problem.even));
    let odd = classes(&f, &verts, &f.coords_where(problem.odd));
    let search = alternating_search([&even, &odd], start, target, max_k);
    Ok(finish(kind, &f, &verts, search, max_k, opts, gens))
}

/// Least `k` with Jónsson terms `t_0..t_k`, searched in `F(3)`.
pub fn jonsson_level(gens: &[FiniteAlgebra], opts: &LevelOptions) -> Result<LevelReport> {
    chain_level(LevelKind::Distributivity, &JONSSON, gens, opts)
}

/// Least `k` with Day terms `t_0..t_k`, searched in `F(4)`.
pub fn day_level(gens: &[FiniteAlgebra], opts: &LevelOptions) -> Result<LevelReport> {
    chain_level(LevelKind::Modularity, &DAY, gens, opts)
}

/// Least `k` with directed Jónsson terms `t_0..t_k`, where consecutive terms
/// satisfy `t_i(x,z,z) = t_{i+1}(x,x,z)`.
pub fn directed_jonsson_length(gens: &[FiniteAlgebra], opts: &LevelOptions) -> Result<LevelReport> {
    let kind = LevelKind::DirectedDistributivity;
    let max_k = opts.max_k.unwrap_or_else(|| default_max_k(gens));
    let f = build(gens, 3, opts)?;
    let x = f.generator(1);
    let z = f.generator(3);
    if x == z {
        return Ok(trivial(kind, &f, vec![f.witness(x)]));
    }
    let verts = vertices(&f, JONSSON.vertex, opts.limits.exec);
    // Coordinates of (a,b,b) and (a,a,b), matched by (algebra, a, b).
    let mut out_coords = Vec::new();
    let mut in_coords = Vec::new();
    for (ai, a) in f.generator_algebras().iter().enumerate() {
        for p in 0..a.size() as Elem {
            for q in 0..a.size() as Elem {
                out_coords.push(f.coord(ai, &[p, q, q]));
                in_coords.push(f.coord(ai, &[p, p, q]));
            }
        }
    }
    let key = |e: usize, cs: &[usize]| cs.iter().map(|&c| f.value(e, c)).collect::<Vec<Elem>>();
    let mut by_in: FxHashMap<Vec<Elem>, Vec<usize>> = FxHashMap::default();
    for (v, &e) in verts.iter().enumerate() {
        by_in.entry(key(e, &in_coords)).or_default().push(v);
    }
    let start = verts.binary_search(&x).expect("x is a vertex");
    let target = verts.binary_search(&z).expect("z is a vertex");
    let mut parent = vec![usize::MAX; verts.len()];
    let mut seen: FxHashSet<usize> = FxHashSet::default();
    seen.insert(start);
    let mut frontier = vec![start];
    let mut depth = 0;
    let mut found = false;
    let mut saturated = false;
    while depth < max_k && !found {
        depth += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            if let Some(succ) = by_in.get(&key(verts[v], &out_coords)) {
                for &w in succ {
                    if seen.insert(w) {
                        parent[w] = v;
                        next.push(w);
                    }
                }
            }
        }
        found = seen.contains(&target);
        if next.is_empty() {
            saturated = !found;
            break;
        }
        frontier = next;
    }
    let chain = found.then(|| {
        let mut c = vec![target];
        while *c.last().unwrap() != start {
            c.push(parent[*c.last().unwrap()]);
        }
        c.reverse();
        c
    });
    let search = Search {
        chain,
        layers: depth,
        saturated,
    };
    Ok(finish(kind, &f, &verts, search, max_k, opts, gens))
}

/// The composite condition: an `(n+1)`-ary near-unanimity term together
/// with Jónsson terms `t_0..t_{2n-3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondReport {
    pub n: usize,
    pub nu: super::linear::SolveReport,
    pub level: LevelReport,
    /// `None` when a budget left either part undecided.
    pub holds: Option<bool>,
}

pub fn diamond_condition(gens: &[FiniteAlgebra], n: usize, opts: &LevelOptions) -> Result<DiamondReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("condition needs n >= 2, got {n}")));
    }
    let nu = super::linear::has_nu_term(gens, n + 1, opts.limits)?;
    let bound = 2 * n - 3;
    let level = jonsson_level(gens, &opts.with_max_k(bound.max(1)))?;
    let nu_ok = match nu.outcome {
        super::linear::SolveOutcome::Found { .. } => Some(true),
        super::linear::SolveOutcome::NoneExists => Some(false),
        super::linear::SolveOutcome::Inconclusive { .. } => None,
    };
    let level_ok = match level.result {
        LevelResult::Exact(k) => Some(k <= bound),
        LevelResult::NoneWithin { .. } => Some(false),
        LevelResult::Interval { lo, hi } => {
            if lo > bound {
                Some(false)
            } else if hi.is_some_and(|h| h <= bound) {
                Some(true)
            } else {
                None
            }
        }
    };
    let holds = match (nu_ok, level_ok) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    };
    Ok(DiamondReport { n, nu, level, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::term::eval_term;
    use crate::Assignment;

    fn lattice2() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "L2",
            2,
            vec![
                ("meet".into(), 2, vec![0, 0, 0, 1]),
                ("join".into(), 2, vec![0, 1, 1, 1]),
            ],
        )
        .unwrap()
    }

    fn semilattice2() -> FiniteAlgebra {
        FiniteAlgebra::new("S2", 2, vec![("meet".into(), 2, vec![0, 0, 0, 1])]).unwrap()
    }

    fn z2() -> FiniteAlgebra {
        FiniteAlgebra::from_fns("Z2", 2, vec![("m", 3, &|a: &[Elem]| a[0] ^ a[1] ^ a[2])]).unwrap()
    }

    fn eval3(a: &FiniteAlgebra, t: &Term, x: Elem, y: Elem, z: Elem) -> Elem {
        eval_term(a, t, &Assignment(vec![x, y, z])).unwrap()
    }

    #[test]
    fn lattice_is_two_distributive() {
        let l = lattice2();
        let rep = jonsson_level(std::slice::from_ref(&l), &LevelOptions::default()).unwrap();
        assert_eq!(rep.exact(), Some(2));
        let chain = rep.witness.unwrap();
        assert_eq!(chain.len(), 3);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(eval3(&l, &chain[1], x, y, x), x);
                assert_eq!(eval3(&l, &chain[0], x, x, y), eval3(&l, &chain[1], x, x, y));
                assert_eq!(eval3(&l, &chain[1], x, y, y), eval3(&l, &chain[2], x, y, y));
            }
        }
    }

    #[test]
    fn semilattice_saturates() {
        let rep = jonsson_level(&[semilattice2()], &LevelOptions::default()).unwrap();
        assert_eq!(
            rep.result,
            LevelResult::NoneWithin {
                bound: 8,
                saturated: true
            }
        );
        let rep = day_level(&[semilattice2()], &LevelOptions::default()).unwrap();
        assert!(matches!(rep.result, LevelResult::NoneWithin { saturated: true, .. }));
    }

    #[test]
    fn lattice_directed_chain_has_median() {
        let l = lattice2();
        let rep = directed_jonsson_length(std::slice::from_ref(&l), &LevelOptions::default()).unwrap();
        assert_eq!(rep.exact(), Some(2));
        let m = &rep.witness.unwrap()[1];
        for bits in 0..8u32 {
            let (x, y, z) = (bits >> 2 & 1, bits >> 1 & 1, bits & 1);
            assert_eq!(eval3(&l, m, x, y, z), (x & y) | (y & z) | (x & z));
        }
    }

    #[test]
    fn z2_is_two_modular() {
        let rep = day_level(&[z2()], &LevelOptions::default()).unwrap();
        assert_eq!(rep.exact(), Some(2));
        let rep = jonsson_level(&[z2()], &LevelOptions::default()).unwrap();
        assert!(matches!(rep.result, LevelResult::NoneWithin { saturated: true, .. }));
    }

    #[test]
    fn trivial_variety_has_level_zero() {
        let t = FiniteAlgebra::new("T", 1, vec![("f".into(), 2, vec![0])]).unwrap();
        for rep in [
            jonsson_level(std::slice::from_ref(&t), &LevelOptions::default()).unwrap(),
            day_level(std::slice::from_ref(&t), &LevelOptions::default()).unwrap(),
            directed_jonsson_length(&[t], &LevelOptions::default()).unwrap(),
        ] {
            assert_eq!(rep.exact(), Some(0));
        }
    }

    #[test]
    fn diamond_on_lattice() {
        let rep = diamond_condition(&[lattice2()], 3, &LevelOptions::default()).unwrap();
        assert_eq!(rep.holds, Some(true));
        let rep = diamond_condition(&[semilattice2()], 3, &LevelOptions::default()).unwrap();
        assert_eq!(rep.holds, Some(false));
    }

    #[test]
    fn incomplete_free_algebra_gives_interval() {
        let opts = LevelOptions::default()
            .with_limits(Limits::default().with_tuple_budget(20))
            .with_upper_bound(5);
        let rep = jonsson_level(&[lattice2()], &opts).unwrap();
        assert!(matches!(rep.result, LevelResult::Interval { lo: 2, hi: Some(h) } if h <= 5));
        assert!(rep.note.is_some());
    }
}
