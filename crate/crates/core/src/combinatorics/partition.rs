use std::fmt;

use super::distribution::Distribution;

/// A tuple of integer partitions, one per multidegree entry.
///
/// Parts keep the order they were built in. Multipartitions read off an
/// intersection list their parts by component minima, which need not be
/// weakly decreasing; `is_sorted` tells the two apart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multipartition {
    groups: Vec<Vec<usize>>,
}

impl Multipartition {
    /// Fails if some part is zero.
    pub fn new(groups: Vec<Vec<usize>>) -> Option<Self> {
        if groups.iter().flatten().any(|&p| p == 0) {
            return None;
        }
        Some(Self { groups })
    }

    /// Every group is a single part equal to the entry (dropped when the entry is 0).
    pub fn coarsest(degrees: &[usize]) -> Self {
        Self {
            groups: degrees
                .iter()
                .map(|&d| if d == 0 { vec![] } else { vec![d] })
                .collect(),
        }
    }

    /// Every part equals one.
    pub fn finest(degrees: &[usize]) -> Self {
        Self {
            groups: degrees.iter().map(|&d| vec![1; d]).collect(),
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn sums(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.iter().sum()).collect()
    }

    pub fn total(&self) -> usize {
        self.groups.iter().flatten().sum()
    }

    /// Number of parts per group.
    pub fn height(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn flattened(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn is_sorted(&self) -> bool {
        self.groups.iter().all(|g| g.windows(2).all(|w| w[0] >= w[1]))
    }

    /// Consecutive-interval distribution of the flattened parts; the slot label
    /// of each block is the group it came from.
    pub fn determined(&self) -> Distribution {
        let mut blocks = Vec::new();
        let mut slots = Vec::new();
        let mut next = 1;
        for (g, parts) in self.groups.iter().enumerate() {
            for &p in parts {
                blocks.push((next..next + p).collect());
                slots.push(g + 1);
                next += p;
            }
        }
        Distribution::with_slots(next - 1, blocks, slots).expect("consecutive parts")
    }
}

impl fmt::Debug for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            let parts: Vec<String> = g.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        write!(f, ")")
    }
}

/// All ways to cut `pool` into blocks of `size` elements.
///
/// Blocks come out sorted by their minima, so each unordered set partition
/// appears once; the stream is in lexicographic order of the block lists.
pub fn fixed_size_partitions(pool: &[usize], size: usize) -> Vec<Vec<Vec<usize>>> {
    let mut sorted = pool.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    if size == 0 {
        if sorted.is_empty() {
            out.push(Vec::new());
        }
        return out;
    }
    if sorted.len() % size != 0 {
        return out;
    }
    let mut acc = Vec::new();
    split(&sorted, size, &mut acc, &mut out);
    out
}

fn split(rest: &[usize], size: usize, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if rest.is_empty() {
        out.push(acc.clone());
        return;
    }
    let head = rest[0];
    let tail = &rest[1..];
    for choice in combinations(tail.len(), size - 1) {
        let mut block = vec![head];
        block.extend(choice.iter().map(|&i| tail[i]));
        let remaining: Vec<usize> = tail
            .iter()
            .enumerate()
            .filter(|(i, _)| !choice.contains(i))
            .map(|(_, &v)| v)
            .collect();
        acc.push(block);
        split(&remaining, size, acc, out);
        acc.pop();
    }
}

/// `k`-subsets of `0..n` as increasing index lists, lexicographically.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairings_of_four() {
        let parts = fixed_size_partitions(&[1, 2, 3, 4], 2);
        assert_eq!(
            parts,
            vec![
                vec![vec![1, 2], vec![3, 4]],
                vec![vec![1, 3], vec![2, 4]],
                vec![vec![1, 4], vec![2, 3]],
            ]
        );
        assert_eq!(fixed_size_partitions(&[1, 2, 3, 4, 5, 6], 2).len(), 15);
        assert_eq!(fixed_size_partitions(&[1, 2, 3, 4, 5, 6], 3).len(), 10);
        assert!(fixed_size_partitions(&[1, 2, 3], 2).is_empty());
        assert_eq!(fixed_size_partitions(&[], 2), vec![Vec::<Vec<usize>>::new()]);
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn multipartition_shape() {
        let m = Multipartition::new(vec![vec![2, 1], vec![], vec![3]]).unwrap();
        assert_eq!(m.sums(), vec![3, 0, 3]);
        assert_eq!(m.height(), vec![2, 0, 1]);
        assert_eq!(m.flattened(), vec![2, 1, 3]);
        let d = m.determined();
        assert_eq!(d.blocks(), &[vec![1, 2], vec![3], vec![4, 5, 6]]);
        assert_eq!(d.slots(), &[1, 1, 3]);
        assert!(m.is_sorted());
        assert!(!Multipartition::new(vec![vec![1, 2]]).unwrap().is_sorted());
        assert!(Multipartition::new(vec![vec![0]]).is_none());
    }
}
