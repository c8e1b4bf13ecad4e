//! Subpower generation with witness terms.
//!
//! A [`SubpowerSpace`] is a product of finitely many coordinates, each carrying
//! one of a list of algebras of a common signature. [`Closure::run`] computes the
//! subuniverse generated by a list of coordinate vectors, breadth first by term
//! depth, recording for each element the operation and argument elements that
//! first produced it.
//!
//! Each round only evaluates argument tuples that contain at least one element
//! found in the previous round. Argument positions that an operation treats
//! symmetrically (in every coordinate algebra) are enumerated as multisets.
//! When every coordinate algebra has two elements, vectors are packed 64
//! coordinates per word and operations are evaluated word-at-a-time through a
//! reduced decision diagram of their table.
//!
//! Witness choice is deterministic: among all tuples producing a new element in
//! a round, the least `(operation index, argument indices)` wins, and new
//! elements are numbered in that order.

use std::ops::{ControlFlow, Range};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::term::Term;
use super::{check_shared_signature, Elem, FiniteAlgebra, OpSymbol, MAX_ARITY};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Work limits shared by the closure-based engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of argument tuples evaluated over the whole closure.
    pub tuple_budget: u64,
    /// Maximum number of elements kept.
    pub element_budget: usize,
    pub exec: Exec,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            tuple_budget: 200_000_000,
            element_budget: 1 << 22,
            exec: Exec::default(),
        }
    }
}

impl Limits {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_tuple_budget(mut self, budget: u64) -> Self {
        self.tuple_budget = budget;
        self
    }
}

/// A run of consecutive coordinates over the same algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub algebra: usize,
    pub len: usize,
}

/// Reduced ordered decision diagram of a 0/1 table, variable order = argument order.
#[derive(Clone, Debug)]
struct Bdd {
    /// (argument, low child, high child); ids 0 and 1 are the constants,
    /// node `k` of this list has id `k + 2`.
    nodes: Vec<(u32, u32, u32)>,
    root: u32,
}

impl Bdd {
    fn build(table: &[Elem], arity: usize) -> Bdd {
        fn go(
            table: &[Elem],
            level: usize,
            arity: usize,
            nodes: &mut Vec<(u32, u32, u32)>,
            unique: &mut FxHashMap<(u32, u32, u32), u32>,
        ) -> u32 {
            if level == arity {
                return table[0];
            }
            let half = table.len() / 2;
            let lo = go(&table[..half], level + 1, arity, nodes, unique);
            let hi = go(&table[half..], level + 1, arity, nodes, unique);
            if lo == hi {
                return lo;
            }
            let key = (level as u32, lo, hi);
            *unique.entry(key).or_insert_with(|| {
                nodes.push(key);
                nodes.len() as u32 + 1
            })
        }
        let mut nodes = Vec::new();
        let mut unique = FxHashMap::default();
        let root = go(table, 0, arity, &mut nodes, &mut unique);
        Bdd { nodes, root }
    }

    #[inline]
    fn eval(&self, args: &[u64], vals: &mut Vec<u64>) -> u64 {
        if self.root < 2 {
            return if self.root == 1 { !0 } else { 0 };
        }
        vals.clear();
        vals.push(0);
        vals.push(!0);
        for &(var, lo, hi) in &self.nodes {
            let a = args[var as usize];
            let v = (!a & vals[lo as usize]) | (a & vals[hi as usize]);
            vals.push(v);
        }
        vals[self.root as usize]
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Bits {
        word_start: Vec<usize>,
        words: Vec<usize>,
        last_mask: Vec<u64>,
        /// `[op][algebra]`
        bdds: Vec<Vec<Bdd>>,
    },
    Dense {
        coord_alg: Vec<usize>,
    },
}

/// Per-thread buffers for [`SubpowerSpace::apply`].
#[derive(Default)]
pub struct Scratch {
    argw: Vec<u64>,
    nodes: Vec<u64>,
    digits: Vec<Elem>,
}

/// Coordinates and encoding of a subpower.
#[derive(Clone, Debug)]
pub struct SubpowerSpace {
    algebras: Vec<FiniteAlgebra>,
    signature: Vec<OpSymbol>,
    blocks: Vec<Block>,
    block_start: Vec<usize>,
    coords: usize,
    width: usize,
    repr: Repr,
    sym_classes: Vec<Vec<Vec<usize>>>,
}

/// Whether swapping argument positions `i` and `j` leaves the table unchanged.
fn swap_invariant(table: &[Elem], size: usize, arity: usize, i: usize, j: usize) -> bool {
    let wi = size.pow((arity - 1 - i) as u32);
    let wj = size.pow((arity - 1 - j) as u32);
    (0..table.len()).all(|idx| {
        let di = (idx / wi) % size;
        let dj = (idx / wj) % size;
        if di == dj {
            return true;
        }
        let other = idx + dj * wi + di * wj - di * wi - dj * wj;
        table[idx] == table[other]
    })
}

/// Classes of mutually interchangeable argument positions of `op`, valid in
/// every algebra of `algs`. Interchangeability is transitive, so a greedy pass
/// over transpositions yields the classes.
pub fn symmetry_classes(algs: &[&FiniteAlgebra], op: usize) -> Vec<Vec<usize>> {
    let arity = algs[0].arity(op);
    let mut class_of = vec![usize::MAX; arity];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..arity {
        if class_of[i] != usize::MAX {
            continue;
        }
        class_of[i] = classes.len();
        let mut class = vec![i];
        #[allow(clippy::needless_range_loop)]
        for j in i + 1..arity {
            if class_of[j] == usize::MAX
                && algs
                    .iter()
                    .all(|a| swap_invariant(a.table(op), a.size(), arity, i, j))
            {
                class_of[j] = classes.len();
                class.push(j);
            }
        }
        classes.push(class);
    }
    classes
}

impl SubpowerSpace {
    /// `blocks` lists coordinate runs in order; every referenced algebra must
    /// share one signature.
    pub fn new(algebras: Vec<FiniteAlgebra>, blocks: Vec<Block>) -> Result<Self> {
        let signature = check_shared_signature(algebras.iter())?;
        if let Some(s) = signature.iter().find(|s| s.arity > MAX_ARITY) {
            return Err(Error::InvalidParameter(format!(
                "arity of `{}` exceeds {MAX_ARITY}",
                s.name
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.algebra >= algebras.len()) {
            return Err(Error::InvalidParameter(format!(
                "block refers to algebra {} of {}",
                b.algebra,
                algebras.len()
            )));
        }
        let coords = blocks.iter().map(|b| b.len).sum();
        let mut block_start = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in &blocks {
            block_start.push(acc);
            acc += b.len;
        }
        let used: Vec<&FiniteAlgebra> = {
            let mut idx: Vec<usize> = blocks.iter().map(|b| b.algebra).collect();
            idx.sort_unstable();
            idx.dedup();
            if idx.is_empty() {
                algebras.iter().collect()
            } else {
                idx.iter().map(|&i| &algebras[i]).collect()
            }
        };
        let sym_classes = (0..signature.len())
            .map(|op| symmetry_classes(&used, op))
            .collect();
        let boolean = blocks.iter().all(|b| algebras[b.algebra].size() == 2);
        let (repr, width) = if boolean {
            let mut word_start = Vec::new();
            let mut words = Vec::new();
            let mut last_mask = Vec::new();
            let mut w = 0;
            for b in &blocks {
                let nw = b.len.div_ceil(64);
                word_start.push(w);
                words.push(nw);
                let rem = b.len % 64;
                last_mask.push(if rem == 0 { !0 } else { (1u64 << rem) - 1 });
                w += nw;
            }
            let bdds = (0..signature.len())
                .map(|op| {
                    algebras
                        .iter()
                        .map(|a| {
                            if a.size() == 2 {
                                Bdd::build(a.table(op), a.arity(op))
                            } else {
                                Bdd {
                                    nodes: Vec::new(),
                                    root: 0,
                                }
                            }
                        })
                        .collect()
                })
                .collect();
            (
                Repr::Bits {
                    word_start,
                    words,
                    last_mask,
                    bdds,
                },
                w,
            )
        } else {
            let coord_alg = blocks
                .iter()
                .flat_map(|b| std::iter::repeat_n(b.algebra, b.len))
                .collect();
            (Repr::Dense { coord_alg }, coords)
        };
        Ok(SubpowerSpace {
            algebras,
            signature,
            blocks,
            block_start,
            coords,
            width,
            repr,
            sym_classes,
        })
    }

    pub fn algebras(&self) -> &[FiniteAlgebra] {
        &self.algebras
    }

    pub fn signature(&self) -> &[OpSymbol] {
        &self.signature
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Index of the first coordinate of block `b`.
    pub fn block_start(&self, b: usize) -> usize {
        self.block_start[b]
    }

    pub fn coords(&self) -> usize {
        self.coords
    }

    /// Machine words per encoded element.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_bit_sliced(&self) -> bool {
        matches!(self.repr, Repr::Bits { .. })
    }

    pub fn symmetry(&self, op: usize) -> &[Vec<usize>] {
        &self.sym_classes[op]
    }

    fn locate(&self, coord: usize) -> (usize, usize) {
        let b = self.block_start.partition_point(|&s| s <= coord) - 1;
        (b, coord - self.block_start[b])
    }

    /// Packs one value per coordinate.
    pub fn encode(&self, values: &[Elem]) -> Result<Vec<u64>> {
        if values.len() != self.coords {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates, got {}",
                self.coords,
                values.len()
            )));
        }
        let mut out = vec![0u64; self.width];
        match &self.repr {
            Repr::Bits { word_start, .. } => {
                for (c, &v) in values.iter().enumerate() {
                    let (b, off) = self.locate(c);
                    if v > 1 {
                        return Err(Error::OutOfRange { elem: v as u64, size: 2 });
                    }
                    out[word_start[b] + off / 64] |= (v as u64) << (off % 64);
                }
            }
            Repr::Dense { coord_alg } => {
                for (c, &v) in values.iter().enumerate() {
                    let size = self.algebras[coord_alg[c]].size();
                    if v as usize >= size {
                        return Err(Error::OutOfRange { elem: v as u64, size });
                    }
                    out[c] = v as u64;
                }
            }
        }
        Ok(out)
    }

    #[inline]
    pub fn value(&self, words: &[u64], coord: usize) -> Elem {
        match &self.repr {
            Repr::Bits { word_start, .. } => {
                let (b, off) = self.locate(coord);
                ((words[word_start[b] + off / 64] >> (off % 64)) & 1) as Elem
            }
            Repr::Dense { .. } => words[coord] as Elem,
        }
    }

    pub fn decode(&self, words: &[u64]) -> Vec<Elem> {
        (0..self.coords).map(|c| self.value(words, c)).collect()
    }

    /// Applies `op` coordinatewise to encoded arguments.
    #[inline]
    pub fn apply(&self, op: usize, args: &[&[u64]], out: &mut [u64], scratch: &mut Scratch) {
        match &self.repr {
            Repr::Bits {
                word_start,
                words,
                last_mask,
                bdds,
            } => {
                scratch.argw.resize(args.len(), 0);
                for (b, block) in self.blocks.iter().enumerate() {
                    let bdd = &bdds[op][block.algebra];
                    for w in 0..words[b] {
                        let wi = word_start[b] + w;
                        for (slot, a) in scratch.argw.iter_mut().zip(args) {
                            *slot = a[wi];
                        }
                        let mask = if w + 1 == words[b] { last_mask[b] } else { !0 };
                        out[wi] = bdd.eval(&scratch.argw, &mut scratch.nodes) & mask;
                    }
                }
            }
            Repr::Dense { coord_alg } => {
                scratch.digits.resize(args.len(), 0);
                for (c, &alg) in coord_alg.iter().enumerate() {
                    let a = &self.algebras[alg];
                    for (d, arg) in scratch.digits.iter_mut().zip(args) {
                        *d = arg[c] as Elem;
                    }
                    out[c] = super::Algebra::apply(a, op, &scratch.digits) as u64;
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The generator bound to variable `x_i`.
    Generator(usize),
    App { op: u32, args: Box<[u32]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureStatus {
    /// No further elements exist.
    Complete,
    /// The round callback asked to stop.
    Stopped,
    /// The next round would evaluate `next_round_tuples` tuples, over budget.
    TupleBudget { next_round_tuples: u128 },
    /// The next round would exceed the element budget.
    ElementBudget { next_round_elements: usize },
}

#[derive(Clone, Debug)]
struct Slot {
    lo: u32,
    hi: u32,
    prev: Option<usize>,
}

#[derive(Clone, Debug)]
struct Shape {
    op: u32,
    slots: Vec<Slot>,
}

#[derive(Clone, Copy, Debug)]
struct Unit {
    shape: u32,
    first: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    op: u32,
    tuple: Box<[u32]>,
}

/// Number of non-decreasing sequences of length `len` over `m` values, saturating.
fn multisets(m: u64, len: usize) -> u128 {
    const CAP: u128 = 1 << 100;
    if len == 0 {
        return 1;
    }
    if m == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..len as u128 {
        acc = acc * (m as u128 + i) / (i + 1);
        if acc > CAP {
            return CAP;
        }
    }
    acc
}

/// Advances the per-class counts of new-segment positions in mixed radix,
/// skipping the all-zero assignment. Returns `false` once exhausted.
fn next_counts(counts: &mut [usize], classes: &[Vec<usize>]) -> bool {
    for (c, class) in counts.iter_mut().zip(classes) {
        *c += 1;
        if *c <= class.len() {
            return true;
        }
        *c = 0;
    }
    false
}

/// Closure state: elements, their witnesses, and round boundaries.
#[derive(Clone, Debug)]
pub struct Closure {
    space: SubpowerSpace,
    store: Vec<u64>,
    witnesses: Vec<Witness>,
    depth: Vec<u32>,
    index: FxHashMap<Box<[u64]>, u32>,
    round_starts: Vec<usize>,
    generators: Vec<u32>,
    tuples: u64,
    status: ClosureStatus,
}

impl Closure {
    /// Closes `generators` (encoded vectors; generator `i` is bound to `x_{i+1}`).
    /// After each round, including round 0 made of the generators, `on_round`
    /// receives the index range of the new elements and may stop the run.
    pub fn run<F>(
        space: SubpowerSpace,
        generators: &[Vec<u64>],
        limits: Limits,
        mut on_round: F,
    ) -> Result<Closure>
    where
        F: FnMut(&Closure, Range<usize>) -> ControlFlow<()>,
    {
        let mut c = Closure {
            space,
            store: Vec::new(),
            witnesses: Vec::new(),
            depth: Vec::new(),
            index: FxHashMap::default(),
            round_starts: vec![0],
            generators: Vec::with_capacity(generators.len()),
            tuples: 0,
            status: ClosureStatus::Complete,
        };
        let width = c.space.width();
        for (i, g) in generators.iter().enumerate() {
            if g.len() != width {
                return Err(Error::InvalidParameter(format!(
                    "generator {i} has width {}, expected {width}",
                    g.len()
                )));
            }
            let id = match c.index.get(&g[..]) {
                Some(&id) => id,
                None => c.push(g, Witness::Generator(i + 1), 0),
            };
            c.generators.push(id);
        }
        let mut frontier = 0;
        let mut round = 0u32;
        if on_round(&c, 0..c.len()).is_break() {
            c.status = ClosureStatus::Stopped;
            return Ok(c);
        }
        loop {
            let n = c.len();
            let (shapes, units, count) = c.plan(frontier, n, round == 0);
            if count == 0 {
                c.status = ClosureStatus::Complete;
                return Ok(c);
            }
            if c.tuples as u128 + count > limits.tuple_budget as u128 {
                c.status = ClosureStatus::TupleBudget {
                    next_round_tuples: count,
                };
                return Ok(c);
            }
            let found = c.execute(&shapes, &units, limits.exec);
            c.tuples += count as u64;
            if found.is_empty() {
                c.status = ClosureStatus::Complete;
                return Ok(c);
            }
            if n + found.len() > limits.element_budget {
                c.status = ClosureStatus::ElementBudget {
                    next_round_elements: found.len(),
                };
                return Ok(c);
            }
            round += 1;
            let mut found: Vec<(Candidate, Box<[u64]>)> =
                found.into_iter().map(|(k, v)| (v, k)).collect();
            found.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            for (cand, words) in found {
                c.push(
                    &words,
                    Witness::App {
                        op: cand.op,
                        args: cand.tuple,
                    },
                    round,
                );
            }
            frontier = n;
            c.round_starts.push(n);
            if on_round(&c, n..c.len()).is_break() {
                c.status = ClosureStatus::Stopped;
                return Ok(c);
            }
        }
    }

    fn push(&mut self, words: &[u64], w: Witness, depth: u32) -> u32 {
        let id = self.witnesses.len() as u32;
        self.store.extend_from_slice(words);
        self.witnesses.push(w);
        self.depth.push(depth);
        self.index.insert(words.into(), id);
        id
    }

    fn plan(&self, frontier: usize, n: usize, first_round: bool) -> (Vec<Shape>, Vec<Unit>, u128) {
        let mut shapes = Vec::new();
        let mut units = Vec::new();
        let mut total: u128 = 0;
        let old = frontier as u64;
        let new = (n - frontier) as u64;
        for (op, sym) in self.space.signature().iter().enumerate() {
            if sym.arity == 0 {
                if first_round {
                    units.push(Unit {
                        shape: shapes.len() as u32,
                        first: 0,
                    });
                    shapes.push(Shape {
                        op: op as u32,
                        slots: Vec::new(),
                    });
                    total += 1;
                }
                continue;
            }
            let classes = self.space.symmetry(op);
            let mut counts = vec![0usize; classes.len()];
            while next_counts(&mut counts, classes) {
                let mut count: u128 = 1;
                for (class, &t) in classes.iter().zip(&counts) {
                    count = count
                        .saturating_mul(multisets(old, class.len() - t))
                        .saturating_mul(multisets(new, t));
                }
                if count == 0 {
                    continue;
                }
                let mut slots = vec![
                    Slot {
                        lo: 0,
                        hi: 0,
                        prev: None
                    };
                    sym.arity
                ];
                for (class, &t) in classes.iter().zip(&counts) {
                    let split = class.len() - t;
                    for (k, &p) in class.iter().enumerate() {
                        let is_new = k >= split;
                        slots[p] = Slot {
                            lo: if is_new { frontier as u32 } else { 0 },
                            hi: if is_new { n as u32 } else { frontier as u32 },
                            prev: if k > 0 && k != split { Some(class[k - 1]) } else { None },
                        };
                    }
                }
                let shape = shapes.len() as u32;
                let s0 = &slots[0];
                units.extend((s0.lo..s0.hi).map(|first| Unit { shape, first }));
                shapes.push(Shape {
                    op: op as u32,
                    slots,
                });
                total = total.saturating_add(count);
            }
        }
        (shapes, units, total)
    }

    fn execute(
        &self,
        shapes: &[Shape],
        units: &[Unit],
        exec: Exec,
    ) -> FxHashMap<Box<[u64]>, Candidate> {
        par::fold_reduce(
            exec,
            units,
            FxHashMap::default,
            |acc, unit| self.run_unit(&shapes[unit.shape as usize], unit.first, acc),
            |mut a, b| {
                if a.len() < b.len() {
                    return merge_candidates(b, a);
                }
                a = merge_candidates(a, b);
                a
            },
        )
    }

    fn run_unit(&self, shape: &Shape, first: u32, acc: &mut FxHashMap<Box<[u64]>, Candidate>) {
        let arity = shape.slots.len();
        let width = self.space.width();
        let mut tuple = [0u32; MAX_ARITY];
        let mut out = vec![0u64; width];
        let mut scratch = Scratch::default();
        let mut visit = |tuple: &[u32], out: &mut Vec<u64>, scratch: &mut Scratch| {
            let mut args: [&[u64]; MAX_ARITY] = [&[]; MAX_ARITY];
            for (slot, &t) in args.iter_mut().zip(tuple) {
                let s = t as usize * width;
                *slot = &self.store[s..s + width];
            }
            self.space
                .apply(shape.op as usize, &args[..tuple.len()], out, scratch);
            if self.index.contains_key(&out[..]) {
                return;
            }
            match acc.get_mut(&out[..]) {
                Some(c) => {
                    if (shape.op, tuple) < (c.op, &c.tuple[..]) {
                        c.op = shape.op;
                        c.tuple = tuple.into();
                    }
                }
                None => {
                    acc.insert(
                        out[..].into(),
                        Candidate {
                            op: shape.op,
                            tuple: tuple.into(),
                        },
                    );
                }
            }
        };
        if arity == 0 {
            visit(&[], &mut out, &mut scratch);
            return;
        }
        tuple[0] = first;
        fill(&shape.slots, 1, &mut tuple[..arity], &mut |t| {
            visit(t, &mut out, &mut scratch)
        });
    }

    pub fn space(&self) -> &SubpowerSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn status(&self) -> &ClosureStatus {
        &self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == ClosureStatus::Complete
    }

    /// Argument tuples evaluated so far.
    pub fn tuples_evaluated(&self) -> u64 {
        self.tuples
    }

    /// Index ranges of the elements found in each round.
    pub fn rounds(&self) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(self.round_starts.len());
        for (i, &s) in self.round_starts.iter().enumerate() {
            let e = self.round_starts.get(i + 1).copied().unwrap_or(self.len());
            out.push(s..e);
        }
        out
    }

    pub fn element(&self, i: usize) -> &[u64] {
        let w = self.space.width();
        &self.store[i * w..(i + 1) * w]
    }

    pub fn value(&self, i: usize, coord: usize) -> Elem {
        self.space.value(self.element(i), coord)
    }

    pub fn values(&self, i: usize) -> Vec<Elem> {
        self.space.decode(self.element(i))
    }

    pub fn find(&self, words: &[u64]) -> Option<usize> {
        self.index.get(words).map(|&i| i as usize)
    }

    /// Element bound to variable `x_var`.
    pub fn generator(&self, var: usize) -> usize {
        self.generators[var - 1] as usize
    }

    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub fn witness(&self, i: usize) -> &Witness {
        &self.witnesses[i]
    }

    /// Expands the witness of element `i` into a term over `x1..x_g`.
    pub fn witness_term(&self, i: usize) -> Term {
        match &self.witnesses[i] {
            Witness::Generator(v) => Term::Var(*v),
            Witness::App { op, args } => Term::App(
                self.space.signature()[*op as usize].name.clone(),
                args.iter().map(|&a| self.witness_term(a as usize)).collect(),
            ),
        }
    }
}

fn merge_candidates(
    mut into: FxHashMap<Box<[u64]>, Candidate>,
    from: FxHashMap<Box<[u64]>, Candidate>,
) -> FxHashMap<Box<[u64]>, Candidate> {
    for (k, v) in from {
        match into.get_mut(&k) {
            Some(c) => {
                if v < *c {
                    *c = v;
                }
            }
            None => {
                into.insert(k, v);
            }
        }
    }
    into
}

/// Enumerates positions `pos..` of `tuple` within their slot bounds, in
/// lexicographic order, calling `leaf` on every complete tuple.
fn fill(slots: &[Slot], pos: usize, tuple: &mut [u32], leaf: &mut dyn FnMut(&[u32])) {
    if pos == tuple.len() {
        leaf(tuple);
        return;
    }
    let s = &slots[pos];
    let lo = match s.prev {
        Some(p) => s.lo.max(tuple[p]),
        None => s.lo,
    };
    for v in lo..s.hi {
        tuple[pos] = v;
        fill(slots, pos + 1, tuple, leaf);
    }
}
