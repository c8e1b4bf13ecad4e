//! Partitions, congruence generation and congruence lattices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::binrel::BinRel;
use crate::algebra::closure::symmetry_classes;
use crate::algebra::{Algebra, Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// An equivalence relation given by block ids, normalized so that blocks are
/// numbered in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Congruence {
    blocks: Vec<u32>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns whether the classes were distinct.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_partition(mut self) -> Congruence {
        let roots: Vec<u32> = (0..self.parent.len()).map(|x| self.find(x) as u32).collect();
        Congruence::from_blocks(&roots)
    }
}

impl Congruence {
    /// Normalizes arbitrary block labels.
    pub fn from_blocks(labels: &[u32]) -> Self {
        let mut map = rustc_hash::FxHashMap::default();
        let blocks = labels
            .iter()
            .map(|&l| {
                let next = map.len() as u32;
                *map.entry(l).or_insert(next)
            })
            .collect();
        Congruence { blocks }
    }

    /// Builds the partition with the given blocks; unlisted elements are singletons.
    pub fn from_partition(size: usize, parts: &[Vec<Elem>]) -> Result<Self> {
        let mut uf = UnionFind::new(size);
        for part in parts {
            for &e in part {
                if e as usize >= size {
                    return Err(Error::OutOfRange {
                        elem: e as u64,
                        size,
                    });
                }
                uf.union(part[0] as usize, e as usize);
            }
        }
        Ok(uf.into_partition())
    }

    pub fn diagonal(size: usize) -> Self {
        Congruence {
            blocks: (0..size as u32).collect(),
        }
    }

    pub fn full(size: usize) -> Self {
        Congruence {
            blocks: vec![0; size],
        }
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_ids(&self) -> &[u32] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Blocks as sorted element lists, in block-id order.
    pub fn parts(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (e, &b) in self.blocks.iter().enumerate() {
            out[b as usize].push(e as Elem);
        }
        out
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn to_rel(&self) -> BinRel {
        let parts = self.parts();
        let mut r = BinRel::empty(self.size());
        for p in &parts {
            for &a in p {
                for &b in p {
                    r.insert(a as usize, b as usize);
                }
            }
        }
        r
    }

    /// Refinement order.
    pub fn leq(&self, other: &Congruence) -> bool {
        let parts = self.parts();
        parts
            .iter()
            .all(|p| p.iter().all(|&e| other.related(p[0] as usize, e as usize)))
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for p in self.parts().iter().chain(other.parts().iter()) {
            for &e in &p[1..] {
                uf.union(p[0] as usize, e as usize);
            }
        }
        uf.into_partition()
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let labels: Vec<u32> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| a * other.size() as u32 + b)
            .collect();
        Congruence::from_blocks(&labels)
    }

    /// First failure of compatibility with the operations of `alg`: an
    /// operation, an argument tuple, a position, and the replacement value at
    /// that position whose images are unrelated.
    pub fn compatibility_violation<A: Algebra + ?Sized>(
        &self,
        alg: &A,
    ) -> Option<(String, Vec<Elem>, usize, Elem)> {
        let n = alg.size();
        // next[e] = next element of e's block (cyclically); the cycle edges
        // generate the block equivalence, so checking them suffices.
        let mut next = vec![0 as Elem; n];
        for p in self.parts() {
            for (i, &e) in p.iter().enumerate() {
                next[e as usize] = p[(i + 1) % p.len()];
            }
        }
        for (op, sym) in alg.signature().iter().enumerate() {
            let r = sym.arity;
            if r == 0 {
                continue;
            }
            let mut args = vec![0 as Elem; r];
            let mut moved = vec![0 as Elem; r];
            loop {
                let v = alg.apply(op, &args);
                for i in 0..r {
                    let nb = next[args[i] as usize];
                    if nb == args[i] {
                        continue;
                    }
                    moved.copy_from_slice(&args);
                    moved[i] = nb;
                    let w = alg.apply(op, &moved);
                    if !self.related(v as usize, w as usize) {
                        return Some((sym.name.clone(), args, i, nb));
                    }
                }
                if !crate::algebra::increment(&mut args, n) {
                    break;
                }
            }
        }
        None
    }

    pub fn is_congruence_of<A: Algebra + ?Sized>(&self, alg: &A) -> bool {
        self.size() == alg.size() && self.compatibility_violation(alg).is_none()
    }
}

/// Positions to use as the free slot of basic translations: one per class of
/// interchangeable argument positions.
fn translation_positions(alg: &FiniteAlgebra) -> Vec<Vec<usize>> {
    (0..alg.signature().len())
        .map(|op| {
            if alg.arity(op) == 0 {
                Vec::new()
            } else {
                symmetry_classes(&[alg], op).iter().map(|c| c[0]).collect()
            }
        })
        .collect()
}

/// Least congruence containing all of `pairs`.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> Result<Congruence> {
    let positions = translation_positions(alg);
    generated_with(alg, pairs, &positions)
}

fn generated_with(
    alg: &FiniteAlgebra,
    pairs: &[(Elem, Elem)],
    positions: &[Vec<usize>],
) -> Result<Congruence> {
    let n = alg.size();
    for &(a, b) in pairs {
        for e in [a, b] {
            if e as usize >= n {
                return Err(Error::OutOfRange {
                    elem: e as u64,
                    size: n,
                });
            }
        }
    }
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(Elem, Elem)> = Vec::new();
    for &(a, b) in pairs {
        if uf.union(a as usize, b as usize) {
            queue.push((a, b));
        }
    }
    let mut args = Vec::new();
    while let Some((x, y)) = queue.pop() {
        for (op, sym) in alg.signature().iter().enumerate() {
            let r = sym.arity;
            for &pos in &positions[op] {
                // Enumerate the other r-1 arguments.
                args.clear();
                args.resize(r, 0 as Elem);
                loop {
                    args[pos] = x;
                    let fx = alg.apply(op, &args);
                    args[pos] = y;
                    let fy = alg.apply(op, &args);
                    if uf.union(fx as usize, fy as usize) {
                        queue.push((fx, fy));
                    }
                    args[pos] = 0;
                    let mut i = r;
                    let mut more = false;
                    while i > 0 {
                        i -= 1;
                        if i == pos {
                            continue;
                        }
                        args[i] += 1;
                        if (args[i] as usize) < n {
                            more = true;
                            break;
                        }
                        args[i] = 0;
                    }
                    if !more {
                        break;
                    }
                }
            }
        }
    }
    Ok(uf.into_partition())
}

/// Cg(a, b).
pub fn principal_congruence(alg: &FiniteAlgebra, a: Elem, b: Elem) -> Result<Congruence> {
    congruence_generated(alg, &[(a, b)])
}

/// Size and count limits for [`all_congruences`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConLimits {
    pub max_size: usize,
    pub max_congruences: usize,
}

impl Default for ConLimits {
    fn default() -> Self {
        ConLimits {
            max_size: 64,
            max_congruences: 100_000,
        }
    }
}

/// Orders by number of blocks (descending), then by block vector.
fn lattice_order(a: &Congruence, b: &Congruence) -> std::cmp::Ordering {
    b.num_blocks()
        .cmp(&a.num_blocks())
        .then_with(|| a.blocks.cmp(&b.blocks))
}

/// The congruence lattice: joins of principal congruences, plus the diagonal.
pub fn all_congruences(alg: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    all_congruences_with(alg, ConLimits::default())
}

pub fn all_congruences_with(alg: &FiniteAlgebra, limits: ConLimits) -> Result<Vec<Congruence>> {
    let n = alg.size();
    if n > limits.max_size {
        return Err(Error::BudgetExceeded(format!(
            "congruence lattice of a {n}-element algebra (limit {})",
            limits.max_size
        )));
    }
    let positions = translation_positions(alg);
    let mut principals = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principals.insert(generated_with(alg, &[(a as Elem, b as Elem)], &positions)?);
        }
    }
    let principals: Vec<Congruence> = principals.into_iter().collect();
    let mut all: BTreeSet<Congruence> = principals.iter().cloned().collect();
    all.insert(Congruence::diagonal(n));
    let mut frontier: Vec<Congruence> = principals.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for p in &principals {
                let j = c.join(p);
                if !all.contains(&j) {
                    if all.len() >= limits.max_congruences {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {} congruences",
                            limits.max_congruences
                        )));
                    }
                    all.insert(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Congruence> = all.into_iter().collect();
    out.sort_by(lattice_order);
    Ok(out)
}
