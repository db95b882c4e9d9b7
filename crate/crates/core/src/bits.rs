//! Dense bitsets over a fixed, sorted token universe. Every checker works on these.

use smallvec::SmallVec;

use crate::token::{Token, TokenSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct Bits(SmallVec<[u64; 2]>);

impl Bits {
    pub fn empty(n: usize) -> Bits {
        Bits(SmallVec::from_elem(0, n.div_ceil(64).max(1)))
    }

    pub fn singleton(n: usize, i: usize) -> Bits {
        let mut b = Bits::empty(n);
        b.insert(i);
        b
    }

    pub fn from_indices(n: usize, it: impl IntoIterator<Item = usize>) -> Bits {
        let mut b = Bits::empty(n);
        for i in it {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn with(&self, i: usize) -> Bits {
        let mut b = self.clone();
        b.insert(i);
        b
    }

    pub fn without(&self, i: usize) -> Bits {
        let mut b = self.clone();
        b.remove(i);
        b
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & !b).collect())
    }

    /// First element of `self` not in `other`.
    pub fn first_missing(&self, other: &Bits) -> Option<usize> {
        self.difference(other).iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

/// Maps the tokens of a sorted universe to bit positions and back.
#[derive(Clone, Debug)]
pub(crate) struct Universe {
    toks: TokenSet,
}

impl Universe {
    pub fn new(toks: TokenSet) -> Universe {
        Universe { toks }
    }

    pub fn len(&self) -> usize {
        self.toks.len()
    }

    pub fn token(&self, i: usize) -> &Token {
        &self.toks.as_slice()[i]
    }

    pub fn index(&self, t: &Token) -> Option<usize> {
        self.toks.position(t)
    }

    pub fn empty(&self) -> Bits {
        Bits::empty(self.len())
    }

    pub fn singleton(&self, i: usize) -> Bits {
        Bits::singleton(self.len(), i)
    }

    /// `None` when some element lies outside the universe.
    pub fn bits(&self, s: &TokenSet) -> Option<Bits> {
        let mut b = self.empty();
        for t in s {
            b.insert(self.index(t)?);
        }
        Some(b)
    }

    pub fn set(&self, b: &Bits) -> TokenSet {
        TokenSet::from_sorted(b.iter().map(|i| self.token(i).clone()).collect())
    }
}

/// Every subset of `base`, smallest masks first. The caller bounds `base.count()`.
pub(crate) fn subsets(n: usize, base: &Bits) -> impl Iterator<Item = Bits> + '_ {
    let idx: Vec<usize> = base.iter().collect();
    let total: u64 = 1 << idx.len();
    (0..total).map(move |mask| Bits::from_indices(n, idx.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, i)| *i)))
}
