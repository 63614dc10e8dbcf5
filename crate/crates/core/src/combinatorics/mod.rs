//! Partitions, permutations of labelled index sets, symmetric-group
//! characters and the central elements `α_λ^(K)`.

mod characters;
mod group_algebra;
mod partition;
mod permutation;

pub use characters::irreducible_character;
pub use group_algebra::{alpha_element, GroupAlgebraElement};
pub use partition::{skew_syt_count, Partition};
pub use permutation::Permutation;
