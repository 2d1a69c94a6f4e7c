use num_bigint::BigUint;

use super::distribution::Distribution;
use super::factorial;
use super::permutation::{next_lex, Permutation};

/// Left cosets `σ·S_D` of a Young subgroup, one representative each.
///
/// The representative is the coset member that is increasing on every block
/// of `D`: if `l < l'` lie in the same block then `σ(l) < σ(l')`. Internally
/// the stream walks words `w` over block labels in lexicographic order, where
/// `w[v]` names the block whose member is sent to `v`.
#[derive(Clone)]
pub struct YoungCosetReps {
    blocks: Vec<Vec<usize>>,
    word: Option<Vec<usize>>,
}

pub fn young_coset_reps(d: &Distribution) -> YoungCosetReps {
    let mut word = Vec::with_capacity(d.ground());
    for (b, block) in d.blocks().iter().enumerate() {
        word.extend(std::iter::repeat(b).take(block.len()));
    }
    YoungCosetReps {
        blocks: d.blocks().to_vec(),
        word: Some(word),
    }
}

/// `t! / ∏ |D_i|!`.
pub fn young_coset_count(d: &Distribution) -> BigUint {
    factorial(d.ground()) / d.young_order()
}

impl YoungCosetReps {
    fn decode(&self, word: &[usize]) -> Permutation {
        let mut images = vec![0; word.len()];
        let mut next = vec![0usize; self.blocks.len()];
        for (v, &b) in word.iter().enumerate() {
            images[self.blocks[b][next[b]] - 1] = v;
            next[b] += 1;
        }
        Permutation::from_zero_based(images)
    }
}

impl Iterator for YoungCosetReps {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let word = self.word.take()?;
        let out = self.decode(&word);
        let mut succ = word;
        if next_lex(&mut succ) {
            self.word = Some(succ);
        }
        Some(out)
    }
}

/// The distributions on `[1, t+2r]` and `[1, t+2s]` whose Young subgroups
/// give the representative shape of the pair stream: `σ` is increasing on the
/// shifted `Δ`-blocks, `τ` on the `Γ`-blocks and on the shifted `Λ`-blocks.
pub fn dp_coset_shapes(
    gamma: &Distribution,
    delta: &Distribution,
    lambda: &Distribution,
) -> (Distribution, Distribution) {
    let (t, r, s) = (gamma.ground(), delta.ground(), lambda.ground());
    let rows = Distribution::embed(&[(t, delta)], t + 2 * r);
    let cols = Distribution::embed(&[(0, gamma), (t, lambda)], t + 2 * s);
    (rows, cols)
}

/// One representative `(σ, τ)` per coset of `S_{t+2r} × S_{t+2s}` modulo
/// `{(ν₁×ν₂×ν₂, ν₁×ν₃×ν₃) : ν₁ ∈ S_Γ, ν₂ ∈ S_Δ, ν₃ ∈ S_Λ}`.
pub struct DpCosetReps {
    sigmas: YoungCosetReps,
    taus_start: YoungCosetReps,
    taus: YoungCosetReps,
    current: Option<Permutation>,
}

pub fn dp_coset_reps(gamma: &Distribution, delta: &Distribution, lambda: &Distribution) -> DpCosetReps {
    let (rows, cols) = dp_coset_shapes(gamma, delta, lambda);
    let mut sigmas = young_coset_reps(&rows);
    let taus = young_coset_reps(&cols);
    let current = sigmas.next();
    DpCosetReps {
        sigmas,
        taus_start: taus.clone(),
        taus,
        current,
    }
}

pub fn dp_coset_count(gamma: &Distribution, delta: &Distribution, lambda: &Distribution) -> BigUint {
    let (rows, cols) = dp_coset_shapes(gamma, delta, lambda);
    young_coset_count(&rows) * young_coset_count(&cols)
}

impl Iterator for DpCosetReps {
    type Item = (Permutation, Permutation);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let sigma = self.current.as_ref()?;
            if let Some(tau) = self.taus.next() {
                return Some((sigma.clone(), tau));
            }
            self.current = self.sigmas.next();
            self.taus = self.taus_start.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeSet, HashSet};

    use super::*;

    fn coset_key(d: &Distribution, sigma: &Permutation) -> Vec<BTreeSet<usize>> {
        d.blocks()
            .iter()
            .map(|b| b.iter().map(|&l| sigma.apply(l)).collect())
            .collect()
    }

    #[test]
    fn small_counts() {
        let whole = Distribution::new(2, vec![vec![1, 2]]).unwrap();
        let reps: Vec<_> = young_coset_reps(&whole).collect();
        assert_eq!(reps, vec![Permutation::identity(2)]);
        assert_eq!(young_coset_reps(&Distribution::singletons(2)).count(), 2);
        let pairs = Distribution::determined(&[2, 2]);
        assert_eq!(young_coset_reps(&pairs).count(), 6);
        assert_eq!(young_coset_reps(&Distribution::determined(&[])).count(), 1);
    }

    #[test]
    fn one_representative_per_coset() {
        for vector in [vec![2, 2], vec![1, 3, 1], vec![3, 2], vec![1, 1, 2, 1]] {
            let d = Distribution::determined(&vector);
            let mut seen = HashSet::new();
            for sigma in young_coset_reps(&d) {
                for (b, block) in d.blocks().iter().enumerate() {
                    let imgs: Vec<_> = block.iter().map(|&l| sigma.apply(l)).collect();
                    assert!(imgs.windows(2).all(|w| w[0] < w[1]), "block {b} not increasing");
                }
                assert!(seen.insert(coset_key(&d, &sigma)));
            }
            let all: HashSet<_> = Permutation::all(d.ground()).map(|p| coset_key(&d, &p)).collect();
            assert_eq!(seen, all);
        }
    }

    #[test]
    fn pair_stream_counts() {
        let empty = Distribution::determined(&[]);
        let one = Distribution::determined(&[1]);
        assert_eq!(dp_coset_reps(&one, &empty, &empty).count(), 1);
        let reps: Vec<_> = dp_coset_reps(&empty, &one, &empty).collect();
        assert_eq!(reps.len(), 2);
        assert!(reps.iter().all(|(_, tau)| tau.is_empty()));
        let two = Distribution::determined(&[2]);
        assert_eq!(dp_coset_reps(&two, &empty, &empty).count(), 2);
        assert_eq!(dp_coset_count(&two, &empty, &empty), BigUint::from(2u32));
    }
}
