//! Free algebras of finitely generated varieties as generated subpowers.
//!
//! `F(k)` over generator algebras `A_1, ..., A_m` is the subalgebra of
//! `prod_j A_j^(A_j^k)` generated by the `k` projections. Coordinates run over
//! the algebras in order and, within each, over all of `A_j^k` in mixed radix
//! with the last variable fastest.

use std::ops::ControlFlow;

use crate::algebra::closure::{Block, Closure, ClosureStatus, Limits, SubpowerSpace};
use crate::algebra::{Elem, FiniteAlgebra, OpSymbol};
use crate::error::{Error, Result};
use crate::Term;

#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    closure: Closure,
    rank: usize,
    /// Starting coordinate of each generator algebra's block.
    offsets: Vec<usize>,
}

/// Largest coordinate count accepted.
const MAX_COORDS: usize = 1 << 24;

fn space_for(gens: &[FiniteAlgebra], k: usize) -> Result<(SubpowerSpace, Vec<Vec<u64>>, Vec<usize>)> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut blocks = Vec::with_capacity(gens.len());
    let mut offsets = Vec::with_capacity(gens.len());
    let mut total = 0usize;
    for (i, a) in gens.iter().enumerate() {
        let len = a
            .size()
            .checked_pow(k as u32)
            .filter(|&l| l <= MAX_COORDS)
            .ok_or_else(|| Error::BudgetExceeded(format!("{}^{k} coordinates", a.size())))?;
        offsets.push(total);
        total += len;
        blocks.push(Block { algebra: i, len });
    }
    if total > MAX_COORDS {
        return Err(Error::BudgetExceeded(format!("{total} coordinates")));
    }
    let space = SubpowerSpace::new(gens.to_vec(), blocks)?;
    let mut projections = vec![Vec::with_capacity(total); k];
    for a in gens {
        let n = a.size();
        let mut digits = vec![0 as Elem; k];
        loop {
            for (v, p) in projections.iter_mut().enumerate() {
                p.push(digits[v]);
            }
            if !crate::algebra::increment(&mut digits, n) {
                break;
            }
        }
    }
    let encoded = projections
        .iter()
        .map(|p| space.encode(p))
        .collect::<Result<Vec<_>>>()?;
    Ok((space, encoded, offsets))
}

/// `F(k)` over `gens`; fails if the closure does not finish within `limits`.
pub fn build_free_algebra(gens: &[FiniteAlgebra], k: usize, limits: Limits) -> Result<FreeAlgebra> {
    let f = build_partial(gens, k, limits, |_, _| ControlFlow::Continue(()))?;
    if !f.is_complete() {
        return Err(Error::BudgetExceeded(format!(
            "free algebra on {k} generators: {} elements reached, {}",
            f.len(),
            describe_status(f.closure.status())
        )));
    }
    Ok(f)
}

pub(crate) fn describe_status(s: &ClosureStatus) -> String {
    match s {
        ClosureStatus::Complete => "complete".into(),
        ClosureStatus::Stopped => "stopped early".into(),
        ClosureStatus::TupleBudget { next_round_tuples } => {
            format!("next round needs {next_round_tuples} tuples")
        }
        ClosureStatus::ElementBudget { next_round_elements } => {
            format!("next round adds {next_round_elements} elements")
        }
    }
}

/// Runs the closure, letting `on_round` inspect each round and stop early.
/// The result may be incomplete; check [`FreeAlgebra::is_complete`].
pub fn build_partial<F>(
    gens: &[FiniteAlgebra],
    k: usize,
    limits: Limits,
    mut on_round: F,
) -> Result<FreeAlgebra>
where
    F: FnMut(&Closure, std::ops::Range<usize>) -> ControlFlow<()>,
{
    let (space, projections, offsets) = space_for(gens, k)?;
    let closure = Closure::run(space, &projections, limits, |c, r| on_round(c, r))?;
    Ok(FreeAlgebra {
        closure,
        rank: k,
        offsets,
    })
}

impl FreeAlgebra {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.closure.is_complete()
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn generator_algebras(&self) -> &[FiniteAlgebra] {
        self.closure.space().algebras()
    }

    pub fn signature(&self) -> &[OpSymbol] {
        self.closure.space().signature()
    }

    pub fn coords(&self) -> usize {
        self.closure.space().coords()
    }

    /// Coordinate of the tuple `args` of generator algebra `alg`.
    pub fn coord(&self, alg: usize, args: &[Elem]) -> usize {
        let n = self.generator_algebras()[alg].size();
        self.offsets[alg] + args.iter().fold(0, |acc, &a| acc * n + a as usize)
    }

    /// All coordinates, as (algebra, tuple), in order.
    pub fn coordinates(&self) -> Vec<(usize, Vec<Elem>)> {
        let mut out = Vec::with_capacity(self.coords());
        for (ai, a) in self.generator_algebras().iter().enumerate() {
            let mut digits = vec![0 as Elem; self.rank];
            loop {
                out.push((ai, digits.clone()));
                if !crate::algebra::increment(&mut digits, a.size()) {
                    break;
                }
            }
        }
        out
    }

    /// Coordinates whose tuple satisfies `pred`, in coordinate order.
    pub fn coords_where(&self, pred: impl Fn(&[Elem]) -> bool) -> Vec<usize> {
        self.coordinates()
            .iter()
            .enumerate()
            .filter(|(_, (_, t))| pred(t))
            .map(|(c, _)| c)
            .collect()
    }

    /// Element representing the variable `x_var` (1-based).
    pub fn generator(&self, var: usize) -> usize {
        self.closure.generator(var)
    }

    pub fn value(&self, elem: usize, coord: usize) -> Elem {
        self.closure.value(elem, coord)
    }

    pub fn values(&self, elem: usize) -> Vec<Elem> {
        self.closure.values(elem)
    }

    pub fn witness(&self, elem: usize) -> Term {
        self.closure.witness_term(elem)
    }

    /// The free algebra as a finite algebra on `0..len`, element ids as in
    /// the closure. Requires a complete closure.
    pub fn to_algebra(&self) -> Result<FiniteAlgebra> {
        if !self.is_complete() {
            return Err(Error::InvalidParameter(
                "free algebra closure is incomplete".into(),
            ));
        }
        let n = self.len();
        let space = self.closure.space();
        let width = space.width();
        let mut ops = Vec::new();
        for (op, sym) in space.signature().iter().enumerate() {
            let len = crate::algebra::table_len(n, sym.arity)
                .filter(|&l| l <= crate::algebra::MAX_TABLE_LEN)
                .ok_or_else(|| {
                    Error::BudgetExceeded(format!("table of `{}` over {n} elements", sym.name))
                })? as usize;
            let mut table = Vec::with_capacity(len);
            let mut args = vec![0 as Elem; sym.arity];
            let mut out = vec![0u64; width];
            let mut scratch = Default::default();
            loop {
                let slices: Vec<&[u64]> = args.iter().map(|&a| self.closure.element(a as usize)).collect();
                space.apply(op, &slices, &mut out, &mut scratch);
                let id = self
                    .closure
                    .find(&out)
                    .ok_or_else(|| Error::InvalidAlgebra("free algebra not closed".into()))?;
                table.push(id as Elem);
                if !crate::algebra::increment(&mut args, n) {
                    break;
                }
            }
            ops.push((sym.name.clone(), sym.arity, table));
        }
        FiniteAlgebra::new(format!("F({})", self.rank), n, ops)
    }
}
