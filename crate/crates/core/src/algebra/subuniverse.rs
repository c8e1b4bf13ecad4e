//! Generated subuniverses and closure checks for single algebras.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::closure::{Block, Closure, Limits, SubpowerSpace};
use super::term::Term;
use super::{Algebra, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// The subuniverse generated by a list of elements, with witness terms.
#[derive(Clone, Debug)]
pub struct SubuniverseResult {
    /// Elements in discovery order (generators first, then by term depth).
    pub elements: Vec<Elem>,
    /// `witnesses[i]` is a term over `x1..x_g` evaluating to `elements[i]`.
    pub witnesses: Vec<Term>,
    /// Element bound to each generator variable.
    pub generator_ids: Vec<Elem>,
    /// Term depth of each element.
    pub depths: Vec<u32>,
}

impl SubuniverseResult {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.contains(&e)
    }

    pub fn witness(&self, e: Elem) -> Option<&Term> {
        self.elements
            .iter()
            .position(|&x| x == e)
            .map(|i| &self.witnesses[i])
    }

    pub fn sorted_elements(&self) -> Vec<Elem> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }
}

/// Least subuniverse of `alg` containing `gens`, each element with a witness.
pub fn generate_subuniverse(alg: &FiniteAlgebra, gens: &[Elem]) -> Result<SubuniverseResult> {
    generate_subuniverse_with(alg, gens, Limits::default())
}

pub fn generate_subuniverse_with(
    alg: &FiniteAlgebra,
    gens: &[Elem],
    limits: Limits,
) -> Result<SubuniverseResult> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let space = SubpowerSpace::new(vec![alg.clone()], vec![Block { algebra: 0, len: 1 }])?;
    let encoded = gens
        .iter()
        .map(|&g| space.encode(&[g]))
        .collect::<Result<Vec<_>>>()?;
    let closure = Closure::run(space, &encoded, limits, |_, _| std::ops::ControlFlow::Continue(()))?;
    if !closure.is_complete() {
        return Err(Error::BudgetExceeded(format!(
            "subuniverse closure stopped at {} elements: {:?}",
            closure.len(),
            closure.status()
        )));
    }
    Ok(SubuniverseResult {
        elements: (0..closure.len()).map(|i| closure.value(i, 0)).collect(),
        witnesses: (0..closure.len()).map(|i| closure.witness_term(i)).collect(),
        generator_ids: gens.to_vec(),
        depths: (0..closure.len()).map(|i| closure.depth(i)).collect(),
    })
}

/// How [`is_subuniverse`] examined the argument tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    Exhaustive { tuples: u64 },
    Sampled { seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub op: String,
    pub args: Vec<Elem>,
    pub result: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubuniverseCheck {
    pub violation: Option<Violation>,
    pub mode: CheckMode,
}

impl SubuniverseCheck {
    pub fn is_closed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Table lookups allowed before switching to sampling.
    pub lookup_budget: u64,
    /// Random tuples drawn per operation in sampled mode.
    pub samples: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            lookup_budget: 100_000_000,
            samples: 1_000_000,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

/// Whether `subset` is closed under every operation of `alg`, with the first
/// violation in lexicographic tuple order (exhaustive mode) or draw order.
pub fn is_subuniverse<A: Algebra + ?Sized>(
    alg: &A,
    subset: &[Elem],
    config: CheckConfig,
) -> Result<SubuniverseCheck> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut member = vec![false; alg.size()];
    for &e in subset {
        if e as usize >= alg.size() {
            return Err(Error::OutOfRange {
                elem: e as u64,
                size: alg.size(),
            });
        }
        member[e as usize] = true;
    }
    let mut elems: Vec<Elem> = subset.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let k = elems.len() as u128;
    let total: u128 = alg
        .signature()
        .iter()
        .map(|s| k.saturating_pow(s.arity as u32))
        .fold(0u128, u128::saturating_add);
    let cost = total.saturating_mul(alg.lookup_cost() as u128);
    if cost <= config.lookup_budget as u128 {
        let violation = exhaustive(alg, &elems, &member, config.exec);
        Ok(SubuniverseCheck {
            violation,
            mode: CheckMode::Exhaustive {
                tuples: total as u64,
            },
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut args = Vec::new();
        for (op, sym) in alg.signature().iter().enumerate() {
            args.resize(sym.arity, 0);
            for _ in 0..config.samples {
                for a in args.iter_mut() {
                    *a = elems[rng.random_range(0..elems.len())];
                }
                let r = alg.apply(op, &args);
                if !member[r as usize] {
                    return Ok(SubuniverseCheck {
                        violation: Some(Violation {
                            op: sym.name.clone(),
                            args: args.clone(),
                            result: r,
                        }),
                        mode: CheckMode::Sampled {
                            seed: config.seed,
                            samples: config.samples,
                        },
                    });
                }
            }
        }
        Ok(SubuniverseCheck {
            violation: None,
            mode: CheckMode::Sampled {
                seed: config.seed,
                samples: config.samples,
            },
        })
    }
}

fn exhaustive<A: Algebra + ?Sized>(
    alg: &A,
    elems: &[Elem],
    member: &[bool],
    exec: Exec,
) -> Option<Violation> {
    for (op, sym) in alg.signature().iter().enumerate() {
        let r = sym.arity;
        if r == 0 {
            let v = alg.apply(op, &[]);
            if !member[v as usize] {
                return Some(Violation {
                    op: sym.name.clone(),
                    args: Vec::new(),
                    result: v,
                });
            }
            continue;
        }
        // Split on the first two arguments so parallel chunks are plentiful.
        let head = if r >= 2 { 2 } else { 1 };
        let chunks = elems.len().pow(head as u32);
        let found = par::find_first(exec, chunks, |c| {
            let mut idx = vec![0usize; r];
            let mut rest = c;
            for p in (0..head).rev() {
                idx[p] = rest % elems.len();
                rest /= elems.len();
            }
            let mut args: Vec<Elem> = idx.iter().map(|&i| elems[i]).collect();
            loop {
                let v = alg.apply(op, &args);
                if !member[v as usize] {
                    return Some((args, v));
                }
                let mut p = r;
                loop {
                    if p == head {
                        return None;
                    }
                    p -= 1;
                    idx[p] += 1;
                    if idx[p] < elems.len() {
                        args[p] = elems[idx[p]];
                        break;
                    }
                    idx[p] = 0;
                    args[p] = elems[0];
                }
            }
        });
        if let Some((args, result)) = found {
            return Some(Violation {
                op: sym.name.clone(),
                args,
                result,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::term::{eval_term, Assignment};
    use crate::algebra::{make_product, ProductView};

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

    #[test]
    fn free_distributive_lattice_on_two() {
        let l = lattice2();
        let p = ProductView::power(&l, 4).unwrap();
        let l4 = crate::algebra::materialize(&p, "L2^4").unwrap();
        let a = p.encode(&[0, 0, 1, 1]);
        let b = p.encode(&[0, 1, 0, 1]);
        let s = generate_subuniverse(&l4, &[a, b]).unwrap();
        assert_eq!(s.len(), 4);
        for (e, w) in s.elements.iter().zip(&s.witnesses) {
            assert_eq!(eval_term(&l4, w, &Assignment(vec![a, b])).unwrap(), *e);
        }
        assert_eq!(s.depths, vec![0, 0, 1, 1]);
    }

    #[test]
    fn whole_universe_and_single_idempotent() {
        let l = lattice2();
        let s = generate_subuniverse(&l, &[0, 1]).unwrap();
        assert_eq!(s.sorted_elements(), vec![0, 1]);
        let s = generate_subuniverse(&l, &[1]).unwrap();
        assert_eq!(s.elements, vec![1]);
        assert!(generate_subuniverse(&l, &[]).is_err());
    }

    #[test]
    fn constants_enter_in_first_round() {
        let a = FiniteAlgebra::new(
            "C",
            3,
            vec![("c".into(), 0, vec![2]), ("f".into(), 1, vec![1, 1, 0])],
        )
        .unwrap();
        let s = generate_subuniverse(&a, &[1]).unwrap();
        assert_eq!(s.sorted_elements(), vec![0, 1, 2]);
        assert_eq!(s.witness(2).unwrap().to_string(), "(c)");
    }

    #[test]
    fn negation_violates() {
        let a = FiniteAlgebra::new("N", 2, vec![("neg".into(), 1, vec![1, 0])]).unwrap();
        let c = is_subuniverse(&a, &[0], CheckConfig::default()).unwrap();
        assert_eq!(
            c.violation,
            Some(Violation {
                op: "neg".into(),
                args: vec![0],
                result: 1
            })
        );
        assert!(is_subuniverse(&lattice2(), &[0, 1], CheckConfig::default())
            .unwrap()
            .is_closed());
        assert!(is_subuniverse(&a, &[], CheckConfig::default()).is_err());
    }

    #[test]
    fn sampling_mode_reports_seed() {
        let l = lattice2();
        let l2 = make_product(&[&l, &l]).unwrap();
        let config = CheckConfig {
            lookup_budget: 1,
            samples: 100,
            seed: 7,
            ..CheckConfig::default()
        };
        let c = is_subuniverse(&l2, &[0, 3], config).unwrap();
        assert!(c.is_closed());
        assert_eq!(c.mode, CheckMode::Sampled { seed: 7, samples: 100 });
        let c = is_subuniverse(&l2, &[1, 2], config).unwrap();
        assert!(!c.is_closed());
    }

    #[test]
    fn modes_agree_on_first_violation() {
        let l = lattice2();
        let l2 = make_product(&[&l, &l]).unwrap();
        let seq = is_subuniverse(
            &l2,
            &[0, 1, 2],
            CheckConfig {
                exec: Exec::Sequential,
                ..CheckConfig::default()
            },
        )
        .unwrap();
        let par = is_subuniverse(
            &l2,
            &[0, 1, 2],
            CheckConfig {
                exec: Exec::Parallel,
                ..CheckConfig::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.violation.unwrap().args, vec![1, 2]);
    }
}
