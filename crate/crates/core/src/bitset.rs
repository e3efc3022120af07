//! Fixed-length bit sets over record indices, stored in blocks of `w` bits.

use std::fmt;
use std::ops::{BitAnd, BitOr};

/// A machine word used as one bit-set block.
pub trait Block:
    Copy + Eq + Send + Sync + fmt::Debug + BitAnd<Output = Self> + BitOr<Output = Self> + 'static
{
    const BITS: usize;
    const ZERO: Self;
    const ONES: Self;

    fn bit(pos: usize) -> Self;
    fn count_ones(self) -> u32;
    /// Mask with the low `len` bits set, `0 < len <= BITS`.
    fn low_mask(len: usize) -> Self;
}

macro_rules! impl_block {
    ($($t:ty),*) => {$(
        impl Block for $t {
            const BITS: usize = <$t>::BITS as usize;
            const ZERO: Self = 0;
            const ONES: Self = <$t>::MAX;

            #[inline]
            fn bit(pos: usize) -> Self {
                1 << pos
            }

            #[inline]
            fn count_ones(self) -> u32 {
                <$t>::count_ones(self)
            }

            #[inline]
            fn low_mask(len: usize) -> Self {
                if len >= <Self as Block>::BITS {
                    Self::ONES
                } else {
                    ((1 as $t) << len) - 1
                }
            }
        }
    )*};
}

impl_block!(u8, u16, u32, u64, u128);

/// A set of record indices in `[0, len)`.
///
/// Bits at positions `>= len` in the final block are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BitSet<B: Block = u64> {
    blocks: Vec<B>,
    len: usize,
}

impl<B: Block> BitSet<B> {
    pub fn new(len: usize) -> Self {
        BitSet {
            blocks: vec![B::ZERO; len.div_ceil(B::BITS)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::new(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Number of bits (records) the set ranges over.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == B::ZERO)
    }

    pub fn blocks(&self) -> &[B] {
        &self.blocks
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.blocks[i / B::BITS] = self.blocks[i / B::BITS] | B::bit(i % B::BITS);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.blocks[i / B::BITS] & B::bit(i % B::BITS) != B::ZERO
    }

    pub fn count(&self) -> u64 {
        self.blocks.iter().map(|b| u64::from(b.count_ones())).sum()
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, &b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a = *a | b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, &b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a = *a & b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            (0..B::BITS)
                .filter(move |&j| block & B::bit(j) != B::ZERO)
                .map(move |j| bi * B::BITS + j)
        })
    }

    /// A set holding every index in `[0, len)`.
    pub fn full(len: usize) -> Self {
        let mut set = Self::new(len);
        set.blocks.fill(B::ONES);
        let tail = len % B::BITS;
        if tail != 0 {
            if let Some(last) = set.blocks.last_mut() {
                *last = B::low_mask(tail);
            }
        }
        set
    }
}

impl<B: Block> fmt::Debug for BitSet<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Popcount of the intersection of `sets`, without materializing it.
///
/// Touches `sets.len() * ceil(len / w)` blocks. An empty slice yields 0.
pub fn intersection_count<B: Block>(sets: &[&BitSet<B>]) -> u64 {
    intersection_count_with_ops(sets).0
}

/// As [`intersection_count`], also returning the number of blocks read.
pub fn intersection_count_with_ops<B: Block>(sets: &[&BitSet<B>]) -> (u64, usize) {
    let Some((first, rest)) = sets.split_first() else {
        return (0, 0);
    };
    let nblocks = first.blocks.len();
    let mut total = 0u64;
    for i in 0..nblocks {
        let mut acc = first.blocks[i];
        for s in rest {
            acc = acc & s.blocks[i];
        }
        total += u64::from(acc.count_ones());
    }
    (total, nblocks * sets.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_tail<B: Block>(set: &BitSet<B>) -> bool {
        (set.len()..set.blocks().len() * B::BITS).all(|i| {
            set.blocks()[i / B::BITS] & B::bit(i % B::BITS) == B::ZERO
        })
    }

    #[test]
    fn full_set_clears_tail() {
        for len in [1, 7, 8, 9, 63, 64, 65, 200] {
            let s8 = BitSet::<u8>::full(len);
            let s64 = BitSet::<u64>::full(len);
            let s128 = BitSet::<u128>::full(len);
            assert_eq!(s8.count(), len as u64);
            assert_eq!(s64.count(), len as u64);
            assert_eq!(s128.count(), len as u64);
            assert!(check_tail(&s8) && check_tail(&s64) && check_tail(&s128));
        }
    }

    #[test]
    fn empty_intersection() {
        assert_eq!(intersection_count::<u64>(&[]), 0);
        let a = BitSet::<u64>::from_indices(10, [1, 2]);
        let b = BitSet::<u64>::from_indices(10, [3]);
        assert_eq!(intersection_count(&[&a, &b]), 0);
    }

    #[test]
    fn ops_count_is_k_times_blocks() {
        let sets: Vec<BitSet<u64>> = (0..3).map(|_| BitSet::full(1000)).collect();
        let refs: Vec<&BitSet<u64>> = sets.iter().collect();
        let (count, ops) = intersection_count_with_ops(&refs);
        assert_eq!(count, 1000);
        assert_eq!(ops, 3 * 1000usize.div_ceil(64));
    }

    proptest! {
        #[test]
        fn matches_naive_sets(
            len in 1usize..300,
            raw_a in prop::collection::vec(any::<usize>(), 0..100),
            raw_b in prop::collection::vec(any::<usize>(), 0..100),
        ) {
            let a_idx: Vec<usize> = raw_a.iter().map(|i| i % len).collect();
            let b_idx: Vec<usize> = raw_b.iter().map(|i| i % len).collect();
            let a = BitSet::<u32>::from_indices(len, a_idx.iter().copied());
            let b = BitSet::<u32>::from_indices(len, b_idx.iter().copied());
            let naive = (0..len).filter(|i| a_idx.contains(i) && b_idx.contains(i)).count();
            prop_assert_eq!(intersection_count(&[&a, &b]), naive as u64);

            let mut u = a.clone();
            u.union_with(&b);
            let naive_union = (0..len).filter(|i| a_idx.contains(i) || b_idx.contains(i)).count();
            prop_assert_eq!(u.count(), naive_union as u64);
            prop_assert!(check_tail(&u));
            prop_assert_eq!(u.iter().count(), naive_union);
        }
    }
}
