//! Binary relations on `0..size` as bit matrices.

use std::fmt;

/// A binary relation stored row by row, `words` machine words per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinRel {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BinRel {
    pub fn empty(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        BinRel {
            size,
            words,
            bits: vec![0; words * size],
        }
    }

    pub fn diagonal(size: usize) -> Self {
        let mut r = BinRel::empty(size);
        for a in 0..size {
            r.insert(a, a);
        }
        r
    }

    pub fn full(size: usize) -> Self {
        let mut r = BinRel::empty(size);
        for a in 0..size {
            for b in 0..size {
                r.insert(a, b);
            }
        }
        r
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = BinRel::empty(size);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        (self.row(a)[b / 64] >> (b % 64)) & 1 == 1
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.size && b < self.size, "pair out of range");
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |a| {
            (0..self.size)
                .filter(move |&b| self.contains(a, b))
                .map(move |b| (a, b))
        })
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn meet(&self, other: &BinRel) -> BinRel {
        assert_eq!(self.size, other.size);
        BinRel {
            size: self.size,
            words: self.words,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &BinRel) -> BinRel {
        assert_eq!(self.size, other.size);
        BinRel {
            size: self.size,
            words: self.words,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }

    /// Relational product: `a (self o other) c` iff `a self b` and `b other c` for some `b`.
    pub fn compose(&self, other: &BinRel) -> BinRel {
        assert_eq!(self.size, other.size);
        let mut out = BinRel::empty(self.size);
        for a in 0..self.size {
            let dst = a * self.words;
            for (wi, &w) in self.row(a).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let b = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (k, &x) in other.row(b).iter().enumerate() {
                        out.bits[dst + k] |= x;
                    }
                }
            }
        }
        out
    }

    pub fn converse(&self) -> BinRel {
        BinRel::from_pairs(self.size, self.pairs().map(|(a, b)| (b, a)))
    }

    pub fn is_subset(&self, other: &BinRel) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Least pair of `self` missing from `other`.
    pub fn first_missing(&self, other: &BinRel) -> Option<(usize, usize)> {
        for a in 0..self.size {
            for (wi, (x, y)) in self.row(a).iter().zip(other.row(a)).enumerate() {
                let d = x & !y;
                if d != 0 {
                    return Some((a, wi * 64 + d.trailing_zeros() as usize));
                }
            }
        }
        None
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }
}

impl fmt::Debug for BinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(size: usize, a: usize, b: usize) -> BinRel {
        BinRel::from_pairs(size, [(a, b), (b, a)])
    }

    #[test]
    fn composition_links_pairs() {
        let r = sym(3, 0, 1).union(&BinRel::diagonal(3));
        let s = sym(3, 1, 2).union(&BinRel::diagonal(3));
        let rs = r.compose(&s);
        assert!(rs.contains(0, 2));
        assert!(!rs.contains(2, 0));
        assert!(!rs.is_transitive() || rs.is_symmetric());
    }

    #[test]
    fn flags() {
        assert!(BinRel::diagonal(5).is_equivalence());
        assert!(BinRel::full(70).is_equivalence());
        assert!(!sym(3, 0, 1).is_reflexive());
        assert_eq!(BinRel::full(70).len(), 4900);
        assert_eq!(
            BinRel::full(3).first_missing(&BinRel::diagonal(3)),
            Some((0, 1))
        );
    }

    fn arb_rel(size: usize) -> impl Strategy<Value = BinRel> {
        proptest::collection::vec(any::<bool>(), size * size).prop_map(move |bits| {
            BinRel::from_pairs(
                size,
                bits.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| (i / size, i % size)),
            )
        })
    }

    proptest! {
        #[test]
        fn compose_matches_definition(r in arb_rel(6), s in arb_rel(6)) {
            let c = r.compose(&s);
            for a in 0..6 {
                for b in 0..6 {
                    let expect = (0..6).any(|m| r.contains(a, m) && s.contains(m, b));
                    prop_assert_eq!(c.contains(a, b), expect);
                }
            }
        }

        #[test]
        fn compose_is_associative(r in arb_rel(5), s in arb_rel(5), t in arb_rel(5)) {
            prop_assert_eq!(r.compose(&s).compose(&t), r.compose(&s.compose(&t)));
        }
    }
}
