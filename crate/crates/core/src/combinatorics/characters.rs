use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use super::Partition;
use crate::error::{domain, Result};

type Key = (Vec<usize>, Vec<usize>);

static MEMO: LazyLock<RwLock<HashMap<Key, i64>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

/// Irreducible character `χ^λ` on the class of cycle type `τ`, by the
/// Murnaghan–Nakayama rule on beta-sets.
pub fn irreducible_character(lambda: &Partition, tau: &Partition) -> Result<i64> {
    if lambda.size() != tau.size() {
        return domain(format!("character of {lambda} evaluated on cycle type {tau} of a different size"));
    }
    Ok(character_unchecked(lambda.parts(), tau.parts()))
}

fn character_unchecked(lambda: &[usize], tau: &[usize]) -> i64 {
    if tau.is_empty() {
        return i64::from(lambda.is_empty());
    }
    let key = (lambda.to_vec(), tau.to_vec());
    if let Some(&v) = MEMO.read().unwrap().get(&key) {
        return v;
    }
    let k = tau[0];
    let rest = &tau[1..];
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let crossed = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let shape = from_beta(&moved);
        total += sign * character_unchecked(&shape, rest);
    }
    MEMO.write().unwrap().insert(key, total);
    total
}

fn from_beta(beta: &[usize]) -> Vec<usize> {
    let len = beta.len();
    let mut parts: Vec<usize> = beta.iter().enumerate().map(|(i, &b)| b - (len - 1 - i)).collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Permutation;
    use num_traits::ToPrimitive;

    fn chi(l: &str, t: &str) -> i64 {
        irreducible_character(&l.parse().unwrap(), &t.parse().unwrap()).unwrap()
    }

    #[test]
    fn trivial_and_sign() {
        for m in 1..=6 {
            for tau in Partition::all_of_size(m) {
                assert_eq!(irreducible_character(&Partition::row(m), &tau).unwrap(), 1);
                let sign = if (tau.size() - tau.length()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(irreducible_character(&Partition::column(m), &tau).unwrap(), sign);
            }
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(chi("2,1", "1,1,1"), 2);
        assert_eq!(chi("2,1", "2,1"), 0);
        assert_eq!(chi("2,1", "3"), -1);
        assert_eq!(chi("2,2", "2,2"), 2);
        assert_eq!(chi("3,1", "2,2"), -1);
        assert!(irreducible_character(&"2".parse().unwrap(), &"1".parse().unwrap()).is_err());
    }

    #[test]
    fn dimension_is_tableau_count() {
        for l in Partition::up_to(7) {
            let id = Partition::column(l.size());
            let d = irreducible_character(&l, &id).unwrap();
            assert_eq!(d, l.syt_count().to_i64().unwrap());
        }
    }

    #[test]
    fn orthogonality_over_the_group() {
        for m in 1..=5 {
            let dom: Vec<usize> = (1..=m).collect();
            let perms = Permutation::all(&dom);
            let shapes = Partition::all_of_size(m);
            let order: i64 = (1..=m as i64).product();
            for a in &shapes {
                for b in &shapes {
                    let s: i64 = perms
                        .iter()
                        .map(|p| {
                            let c = p.cycle_type();
                            irreducible_character(a, &c).unwrap() * irreducible_character(b, &c).unwrap()
                        })
                        .sum();
                    assert_eq!(s, if a == b { order } else { 0 });
                }
            }
            for p in &perms {
                let c = p.cycle_type();
                let s: i64 = shapes
                    .iter()
                    .map(|l| irreducible_character(l, &c).unwrap() * l.syt_count().to_i64().unwrap())
                    .sum();
                assert_eq!(s, if p.is_identity() { order } else { 0 });
            }
        }
    }
}
