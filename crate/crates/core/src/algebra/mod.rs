//! Finite algebras given by operation tables.
//!
//! Elements are the integers `0..size`. An operation of arity `r` is stored as a
//! flat table of `size^r` entries in row-major order with the last argument
//! varying fastest, so `f(a_1, ..., a_r)` lives at `sum a_i * size^(r-i)`.

pub mod closure;
pub mod equations;
pub mod io;
pub mod subuniverse;
pub mod term;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use term::Term;

/// An element of a finite algebra.
pub type Elem = u32;

/// Operation name, arity and evaluation function for [`FiniteAlgebra::from_fns`].
pub type OpFn<'a> = (&'a str, usize, &'a dyn Fn(&[Elem]) -> Elem);

/// Largest arity supported by [`ProductView`] and the closure kernels.
pub const MAX_ARITY: usize = 32;

/// Largest operation table [`make_product`] and [`make_term_reduct`] will materialize.
pub const MAX_TABLE_LEN: u64 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        OpSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// Read access to an algebra whose operations can be applied to element tuples.
pub trait Algebra: Sync {
    fn size(&self) -> usize;
    fn signature(&self) -> &[OpSymbol];
    fn apply(&self, op: usize, args: &[Elem]) -> Elem;

    /// Table lookups performed by one call to [`Algebra::apply`].
    fn lookup_cost(&self) -> u64 {
        1
    }

    fn op_index(&self, name: &str) -> Option<usize> {
        self.signature().iter().position(|s| s.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    signature: Vec<OpSymbol>,
    tables: Vec<Vec<Elem>>,
}

/// `size^arity`, or `None` on overflow.
pub fn table_len(size: usize, arity: usize) -> Option<u64> {
    (size as u64).checked_pow(arity as u32)
}

#[inline]
pub(crate) fn table_index(size: usize, args: &[Elem]) -> usize {
    args.iter()
        .fold(0usize, |acc, &a| acc * size + a as usize)
}

impl FiniteAlgebra {
    /// Builds an algebra, checking every table against the universe size.
    pub fn new(
        name: impl Into<String>,
        size: usize,
        ops: Vec<(String, usize, Vec<Elem>)>,
    ) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::InvalidAlgebra("universe must be nonempty".into()));
        }
        let mut signature = Vec::with_capacity(ops.len());
        let mut tables = Vec::with_capacity(ops.len());
        for (op, arity, table) in ops {
            if signature.iter().any(|s: &OpSymbol| s.name == op) {
                return Err(Error::InvalidAlgebra(format!("duplicate operation `{op}`")));
            }
            let expected = table_len(size, arity)
                .ok_or_else(|| Error::InvalidAlgebra(format!("table of `{op}` is too large")))?;
            if table.len() as u64 != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{op}` has {} entries, expected {expected}",
                    table.len()
                )));
            }
            if let Some(&bad) = table.iter().find(|&&e| e as usize >= size) {
                return Err(Error::OutOfRange {
                    elem: bad as u64,
                    size,
                });
            }
            signature.push(OpSymbol::new(op, arity));
            tables.push(table);
        }
        Ok(FiniteAlgebra {
            name,
            size,
            signature,
            tables,
        })
    }

    /// Builds an algebra by evaluating `f` on every argument tuple of each operation.
    pub fn from_fns(
        name: impl Into<String>,
        size: usize,
        ops: Vec<OpFn<'_>>,
    ) -> Result<Self> {
        let mut built = Vec::with_capacity(ops.len());
        for (op, arity, f) in ops {
            let len = table_len(size, arity)
                .filter(|&l| l <= MAX_TABLE_LEN)
                .ok_or_else(|| Error::BudgetExceeded(format!("table of `{op}` too large")))?;
            let mut args = vec![0 as Elem; arity];
            let mut table = Vec::with_capacity(len as usize);
            for _ in 0..len {
                table.push(f(&args));
                increment(&mut args, size);
            }
            built.push((op.to_string(), arity, table));
        }
        FiniteAlgebra::new(name, size, built)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn table(&self, op: usize) -> &[Elem] {
        &self.tables[op]
    }

    pub fn arity(&self, op: usize) -> usize {
        self.signature[op].arity
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> bool {
        self.signature == other.signature
    }

    /// Whether the operation ignores argument `pos` (0-based).
    pub fn is_constant_in_argument(&self, op: usize, pos: usize) -> bool {
        let arity = self.arity(op);
        assert!(pos < arity);
        let stride = self.size.pow((arity - 1 - pos) as u32);
        let table = &self.tables[op];
        (0..table.len()).all(|i| {
            let base = i - ((i / stride) % self.size) * stride;
            table[i] == table[base]
        })
    }
}

impl Algebra for FiniteAlgebra {
    fn size(&self) -> usize {
        self.size
    }

    fn signature(&self) -> &[OpSymbol] {
        &self.signature
    }

    #[inline]
    fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        self.tables[op][table_index(self.size, args)]
    }
}

/// Odometer step over `0..size` digits, last digit fastest. Returns false on wrap.
pub(crate) fn increment(digits: &mut [Elem], size: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if (*d as usize) < size {
            return true;
        }
        *d = 0;
    }
    false
}

pub(crate) fn check_shared_signature<'a>(
    algs: impl IntoIterator<Item = &'a FiniteAlgebra>,
) -> Result<Vec<OpSymbol>> {
    let mut iter = algs.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidParameter("at least one algebra is required".into()))?;
    for other in iter {
        if !first.same_signature(other) {
            return Err(Error::SignatureMismatch(format!(
                "`{}` and `{}` have different signatures",
                first.name(),
                other.name()
            )));
        }
    }
    Ok(first.signature().to_vec())
}

/// A direct product evaluated on demand, without materializing its tables.
///
/// Element ids encode tuples in mixed radix with the last factor fastest.
#[derive(Clone, Debug)]
pub struct ProductView<'a> {
    factors: Vec<&'a FiniteAlgebra>,
    weights: Vec<usize>,
    size: usize,
    signature: Vec<OpSymbol>,
}

impl<'a> ProductView<'a> {
    pub fn new(factors: Vec<&'a FiniteAlgebra>) -> Result<Self> {
        let signature = check_shared_signature(factors.iter().copied())?;
        if let Some(s) = signature.iter().find(|s| s.arity > MAX_ARITY) {
            return Err(Error::InvalidParameter(format!(
                "arity of `{}` exceeds {MAX_ARITY}",
                s.name
            )));
        }
        let mut size: usize = 1;
        for f in &factors {
            size = size
                .checked_mul(f.size())
                .filter(|&s| s <= u32::MAX as usize)
                .ok_or_else(|| Error::BudgetExceeded("product universe too large".into()))?;
        }
        let mut weights = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * factors[i + 1].size();
        }
        Ok(ProductView {
            factors,
            weights,
            size,
            signature,
        })
    }

    /// Product of `alg` with itself `power` times.
    pub fn power(alg: &'a FiniteAlgebra, power: usize) -> Result<Self> {
        ProductView::new(vec![alg; power])
    }

    pub fn factors(&self) -> &[&'a FiniteAlgebra] {
        &self.factors
    }

    pub fn encode(&self, tuple: &[Elem]) -> Elem {
        assert_eq!(tuple.len(), self.factors.len());
        tuple
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| t as usize * w)
            .sum::<usize>() as Elem
    }

    pub fn decode(&self, id: Elem) -> Vec<Elem> {
        self.factors
            .iter()
            .zip(&self.weights)
            .map(|(f, &w)| ((id as usize / w) % f.size()) as Elem)
            .collect()
    }

    #[inline]
    fn coordinate(&self, id: Elem, factor: usize) -> Elem {
        ((id as usize / self.weights[factor]) % self.factors[factor].size()) as Elem
    }
}

impl Algebra for ProductView<'_> {
    fn size(&self) -> usize {
        self.size
    }

    fn signature(&self) -> &[OpSymbol] {
        &self.signature
    }

    fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        let mut buf = [0 as Elem; MAX_ARITY];
        let local = &mut buf[..args.len()];
        let mut out = 0usize;
        for (i, f) in self.factors.iter().enumerate() {
            for (slot, &a) in local.iter_mut().zip(args) {
                *slot = self.coordinate(a, i);
            }
            out += f.apply(op, local) as usize * self.weights[i];
        }
        out as Elem
    }

    fn lookup_cost(&self) -> u64 {
        self.factors.len() as u64
    }
}

/// Materializes any [`Algebra`] into tables.
pub fn materialize<A: Algebra + ?Sized>(alg: &A, name: impl Into<String>) -> Result<FiniteAlgebra> {
    let size = alg.size();
    let mut ops = Vec::new();
    for (i, sym) in alg.signature().iter().enumerate() {
        let len = table_len(size, sym.arity)
            .filter(|&l| l <= MAX_TABLE_LEN)
            .ok_or_else(|| {
                Error::BudgetExceeded(format!("table of `{}` would be too large", sym.name))
            })?;
        let mut args = vec![0 as Elem; sym.arity];
        let mut table = Vec::with_capacity(len as usize);
        for _ in 0..len {
            table.push(alg.apply(i, &args));
            increment(&mut args, size);
        }
        ops.push((sym.name.clone(), sym.arity, table));
    }
    FiniteAlgebra::new(name, size, ops)
}

/// Coordinatewise product, materialized.
pub fn make_product(algs: &[&FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let view = ProductView::new(algs.to_vec())?;
    let name = algs
        .iter()
        .map(|a| a.name())
        .collect::<Vec<_>>()
        .join("x");
    materialize(&view, name)
}

/// Same universe as `base`, with new operations defined by terms over `base`.
pub fn make_term_reduct(
    base: &FiniteAlgebra,
    name: impl Into<String>,
    defs: &[(&str, usize, Term)],
) -> Result<FiniteAlgebra> {
    let size = base.size();
    let mut ops = Vec::with_capacity(defs.len());
    for (op, arity, def) in defs {
        let compiled = term::CompiledTerm::compile(def, base.signature())?;
        if compiled.max_var() > *arity {
            return Err(Error::InvalidParameter(format!(
                "definition of `{op}` uses x{} but has arity {arity}",
                compiled.max_var()
            )));
        }
        let len = table_len(size, *arity)
            .filter(|&l| l <= MAX_TABLE_LEN)
            .ok_or_else(|| Error::BudgetExceeded(format!("table of `{op}` too large")))?;
        let mut args = vec![0 as Elem; *arity];
        let mut stack = Vec::new();
        let mut table = Vec::with_capacity(len as usize);
        for _ in 0..len {
            table.push(compiled.eval(base, &args, &mut stack));
            increment(&mut args, size);
        }
        ops.push((op.to_string(), *arity, table));
    }
    FiniteAlgebra::new(name, size, ops)
}
