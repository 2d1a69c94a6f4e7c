use std::fmt;

use num_bigint::BigUint;

use super::permutation::Permutation;
use super::factorial;
use crate::error::CombinatoricsError;

/// An ordered partition of `[1, n]` into non-empty blocks.
///
/// Every block also carries a slot label. For a distribution read off a
/// vector `(t_1, …, t_d)` the label is the index of the entry that produced
/// the block, so zero entries can be skipped without losing track of which
/// arrow a block belongs to. Otherwise the label is the block's own index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    ground: usize,
    blocks: Vec<Vec<usize>>,
    slots: Vec<usize>,
    // (block, rank) of every point, both 0-based
    owner: Vec<(usize, usize)>,
}

impl Distribution {
    /// Blocks are given as lists of 1-based points; each block is sorted.
    pub fn new(ground: usize, blocks: Vec<Vec<usize>>) -> Result<Self, CombinatoricsError> {
        let slots = (1..=blocks.len()).collect();
        Self::with_slots(ground, blocks, slots)
    }

    pub fn with_slots(
        ground: usize,
        mut blocks: Vec<Vec<usize>>,
        slots: Vec<usize>,
    ) -> Result<Self, CombinatoricsError> {
        let bad = |reason: String| CombinatoricsError::NotAPartition { ground, reason };
        if slots.len() != blocks.len() {
            return Err(bad("one slot label per block required".into()));
        }
        let mut owner = vec![(usize::MAX, 0); ground];
        for (b, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(bad(format!("block {} is empty", b + 1)));
            }
            block.sort_unstable();
            for (rank, &l) in block.iter().enumerate() {
                if l == 0 || l > ground {
                    return Err(CombinatoricsError::OutOfGround { point: l, ground });
                }
                if owner[l - 1].0 != usize::MAX {
                    return Err(bad(format!("point {l} appears twice")));
                }
                owner[l - 1] = (b, rank);
            }
        }
        if let Some(l) = owner.iter().position(|o| o.0 == usize::MAX) {
            return Err(bad(format!("point {} is not covered", l + 1)));
        }
        Ok(Self {
            ground,
            blocks,
            slots,
            owner,
        })
    }

    /// The distribution of `[1, Σv]` into consecutive intervals of lengths `v`.
    /// Zero entries give no block; slot labels remember the entry index.
    pub fn determined(vector: &[usize]) -> Self {
        let mut blocks = Vec::new();
        let mut slots = Vec::new();
        let mut next = 1;
        for (i, &len) in vector.iter().enumerate() {
            if len == 0 {
                continue;
            }
            blocks.push((next..next + len).collect());
            slots.push(i + 1);
            next += len;
        }
        Self::with_slots(next - 1, blocks, slots).expect("consecutive intervals partition the ground")
    }

    /// One block per point.
    pub fn singletons(n: usize) -> Self {
        Self::determined(&vec![1; n])
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block `i`, 1-based.
    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i - 1]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Slot label of block `i`.
    pub fn slot(&self, i: usize) -> usize {
        self.slots[i - 1]
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    fn check(&self, l: usize) -> Result<(usize, usize), CombinatoricsError> {
        if l == 0 || l > self.ground {
            return Err(CombinatoricsError::OutOfGround {
                point: l,
                ground: self.ground,
            });
        }
        Ok(self.owner[l - 1])
    }

    /// Index of the block holding `l`.
    pub fn block_of(&self, l: usize) -> Result<usize, CombinatoricsError> {
        self.check(l).map(|(b, _)| b + 1)
    }

    /// Rank of `l` inside its block: how many block members are `≤ l`.
    pub fn pos_in_block(&self, l: usize) -> Result<usize, CombinatoricsError> {
        self.check(l).map(|(_, r)| r + 1)
    }

    /// Slot label of the block holding `l`.
    pub fn slot_of(&self, l: usize) -> Result<usize, CombinatoricsError> {
        self.check(l).map(|(b, _)| self.slots[b])
    }

    pub(crate) fn owner0(&self, l0: usize) -> (usize, usize) {
        self.owner[l0]
    }

    /// All non-empty `A_i ∩ B_j`, ordered by their minima.
    pub fn intersect(&self, other: &Self) -> Result<Self, CombinatoricsError> {
        if self.ground != other.ground {
            return Err(CombinatoricsError::GroundMismatch {
                left: self.ground,
                right: other.ground,
            });
        }
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for l in 0..self.ground {
            let key = (self.owner[l].0, other.owner[l].0);
            let slot = *index.entry(key).or_insert_with(|| {
                parts.push(Vec::new());
                parts.len() - 1
            });
            parts[slot].push(l + 1);
        }
        Self::new(self.ground, parts)
    }

    /// `B^σ`, whose block `i` is `σ⁻¹(B_i)`.
    pub fn apply_permutation(&self, sigma: &Permutation) -> Result<Self, CombinatoricsError> {
        if sigma.len() != self.ground {
            return Err(CombinatoricsError::GroundMismatch {
                left: self.ground,
                right: sigma.len(),
            });
        }
        let inv = sigma.inverse();
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&l| inv.apply(l)).collect())
            .collect();
        Self::with_slots(self.ground, blocks, self.slots.clone())
    }

    /// `self ≤ other`: every block of `self` sits inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        self.ground == other.ground
            && self.blocks.iter().all(|b| {
                let target = other.owner[b[0] - 1].0;
                b.iter().all(|&l| other.owner[l - 1].0 == target)
            })
    }

    /// The blocks of `self ∩ [lo, hi]` shifted down by `lo - 1`; empty pieces are dropped.
    /// Slot labels keep the index of the originating block.
    pub fn slice(&self, lo: usize, hi: usize) -> Self {
        let mut blocks = Vec::new();
        let mut slots = Vec::new();
        for (b, block) in self.blocks.iter().enumerate() {
            let piece: Vec<usize> = block
                .iter()
                .filter(|&&l| l >= lo && l <= hi)
                .map(|&l| l + 1 - lo)
                .collect();
            if !piece.is_empty() {
                blocks.push(piece);
                slots.push(b + 1);
            }
        }
        let ground = if hi >= lo { hi + 1 - lo } else { 0 };
        Self::with_slots(ground, blocks, slots).expect("slice of a partition is a partition")
    }

    /// The same blocks moved up by `offset` inside `[1, ground]`, together with
    /// singletons for every other point. Used to embed blocks of a sub-interval.
    pub(crate) fn embed(parts: &[(usize, &Distribution)], ground: usize) -> Self {
        let mut covered = vec![false; ground];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (offset, d) in parts {
            for b in d.blocks() {
                let moved: Vec<usize> = b.iter().map(|l| l + offset).collect();
                for &l in &moved {
                    covered[l - 1] = true;
                }
                blocks.push(moved);
            }
        }
        for l in 1..=ground {
            if !covered[l - 1] {
                blocks.push(vec![l]);
            }
        }
        blocks.sort_by_key(|b| b[0]);
        Self::new(ground, blocks).expect("embedded blocks partition the ground")
    }

    /// `|S_D| = ∏ |D_i|!`.
    pub fn young_order(&self) -> BigUint {
        self.blocks.iter().map(|b| factorial(b.len())).product()
    }

    /// Whether `σ` preserves every block setwise, i.e. `σ ∈ S_D`.
    pub fn stabilized_by(&self, sigma: &Permutation) -> bool {
        sigma.len() == self.ground
            && (1..=self.ground).all(|l| self.owner[l - 1].0 == self.owner[sigma.apply(l) - 1].0)
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, l) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(ground: usize, blocks: &[&[usize]]) -> Distribution {
        Distribution::new(ground, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn determined_from_vector() {
        let t = Distribution::determined(&[2, 1]);
        assert_eq!(t.blocks(), &[vec![1, 2], vec![3]]);
        let t = Distribution::determined(&[0, 3]);
        assert_eq!(t.blocks(), &[vec![1, 2, 3]]);
        assert_eq!(t.slot(1), 2);
        assert_eq!(t.slot_of(3).unwrap(), 2);
        let t = Distribution::determined(&[1, 1, 1]);
        assert_eq!(t.len(), 3);
        assert_eq!(Distribution::determined(&[0, 0]).ground(), 0);
    }

    #[test]
    fn block_and_rank_lookup() {
        let a = d(3, &[&[1, 3], &[2]]);
        assert_eq!(a.block_of(3).unwrap(), 1);
        assert_eq!(a.pos_in_block(3).unwrap(), 2);
        let b = d(3, &[&[1, 2], &[3]]);
        assert_eq!((b.block_of(3).unwrap(), b.pos_in_block(3).unwrap()), (2, 1));
        let t = Distribution::determined(&[2, 1]);
        assert_eq!((t.block_of(2).unwrap(), t.pos_in_block(2).unwrap()), (1, 2));
        assert!(a.block_of(4).is_err());
        assert!(a.block_of(0).is_err());
    }

    #[test]
    fn intersections_order_by_minima() {
        let a = d(4, &[&[1, 2], &[3, 4]]);
        let b = d(4, &[&[1, 3], &[2, 4]]);
        assert_eq!(a.intersect(&b).unwrap(), Distribution::singletons(4));
        let whole = d(3, &[&[1, 2, 3]]);
        let split = d(3, &[&[1, 2], &[3]]);
        assert_eq!(whole.intersect(&split).unwrap(), split);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(a.intersect(&whole).is_err());
    }

    #[test]
    fn permutation_pulls_blocks_back() {
        let b = d(2, &[&[1], &[2]]);
        let swapped = b.apply_permutation(&Permutation::transposition(2, 1, 2)).unwrap();
        assert_eq!(swapped.blocks(), &[vec![2], vec![1]]);
        assert_eq!(b.apply_permutation(&Permutation::identity(2)).unwrap(), b);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Distribution::new(3, vec![vec![1, 2]]).is_err());
        assert!(Distribution::new(2, vec![vec![1, 2], vec![2]]).is_err());
        assert!(Distribution::new(2, vec![vec![1, 2], vec![]]).is_err());
    }

    #[test]
    fn slices_drop_empty_pieces() {
        let a = d(6, &[&[1, 4], &[2, 3], &[5, 6]]);
        let mid = a.slice(3, 4);
        assert_eq!(mid.blocks(), &[vec![2], vec![1]]);
        assert_eq!(mid.slots(), &[1, 2]);
        assert_eq!(a.slice(1, 0).ground(), 0);
    }
}
