//! Permutations, distributions of integer intervals, and Young-subgroup cosets.

mod cosets;
mod distribution;
mod partition;
mod permutation;

use num_bigint::BigUint;

pub use cosets::{
    dp_coset_count, dp_coset_reps, dp_coset_shapes, young_coset_count, young_coset_reps, DpCosetReps,
    YoungCosetReps,
};
pub use distribution::Distribution;
pub use partition::{combinations, fixed_size_partitions, Multipartition};
pub use permutation::{AllPermutations, Permutation};

pub(crate) use permutation::sign_of;

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}
