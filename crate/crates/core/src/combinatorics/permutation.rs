use std::fmt;

use itertools::Itertools;

use super::Partition;
use crate::error::Result;

/// Bijection of a finite ordered set of integer labels.
///
/// `images[i]` is the image of `domain[i]`. Composition follows the operator
/// convention `(σ ∘ τ)(k) = σ(τ(k))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    domain: Vec<usize>,
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(domain: &[usize]) -> Self {
        Permutation { domain: domain.to_vec(), images: domain.to_vec() }
    }

    /// One-line notation: `images[i] = σ(domain[i])`.
    pub fn from_images(domain: &[usize], images: &[usize]) -> Result<Self> {
        check_labels(domain)?;
        if images.len() != domain.len() {
            return domain_err_len(domain, images);
        }
        let mut sorted_dom = domain.to_vec();
        let mut sorted_img = images.to_vec();
        sorted_dom.sort_unstable();
        sorted_img.sort_unstable();
        if sorted_dom != sorted_img {
            return crate::error::domain(format!("{images:?} is not a bijection of {domain:?}"));
        }
        Ok(Permutation { domain: domain.to_vec(), images: images.to_vec() })
    }

    pub fn transposition(domain: &[usize], a: usize, b: usize) -> Result<Self> {
        check_labels(domain)?;
        if !domain.contains(&a) || !domain.contains(&b) || a == b {
            return crate::error::domain(format!("cannot swap {a} and {b} in {domain:?}"));
        }
        let images = domain
            .iter()
            .map(|&k| {
                if k == a {
                    b
                } else if k == b {
                    a
                } else {
                    k
                }
            })
            .collect();
        Ok(Permutation { domain: domain.to_vec(), images })
    }

    /// Permutation given by disjoint cycles, e.g. `[[1, 2, 3]]` maps 1→2→3→1.
    pub fn from_cycles(domain: &[usize], cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images = domain.to_vec();
        for cycle in cycles {
            for (i, &from) in cycle.iter().enumerate() {
                let to = cycle[(i + 1) % cycle.len()];
                match domain.iter().position(|&k| k == from) {
                    Some(pos) => images[pos] = to,
                    None => return crate::error::domain(format!("label {from} not in {domain:?}")),
                }
            }
        }
        Self::from_images(domain, &images)
    }

    /// Every permutation of `domain`, in lexicographic order of images.
    pub fn all(domain: &[usize]) -> Vec<Permutation> {
        domain
            .iter()
            .copied()
            .permutations(domain.len())
            .map(|images| Permutation { domain: domain.to_vec(), images })
            .collect()
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn apply(&self, label: usize) -> Option<usize> {
        self.domain.iter().position(|&k| k == label).map(|i| self.images[i])
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.images
    }

    /// `self ∘ other`; both must share the same ordered domain.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.domain != other.domain {
            return crate::error::domain(format!(
                "cannot compose permutations of {:?} and {:?}",
                self.domain, other.domain
            ));
        }
        let images = other.images.iter().map(|&k| self.apply(k).expect("label in domain")).collect();
        Ok(Permutation { domain: self.domain.clone(), images })
    }

    pub fn inverse(&self) -> Permutation {
        let images = self
            .domain
            .iter()
            .map(|&k| {
                let pos = self.images.iter().position(|&img| img == k).unwrap();
                self.domain[pos]
            })
            .collect();
        Permutation { domain: self.domain.clone(), images }
    }

    /// Cycle lengths of the disjoint cycle decomposition.
    pub fn cycle_type(&self) -> Partition {
        let n = self.domain.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut pos = start;
            while !seen[pos] {
                seen[pos] = true;
                len += 1;
                let next = self.images[pos];
                pos = self.domain.iter().position(|&k| k == next).unwrap();
            }
            lengths.push(len);
        }
        Partition::from_unsorted(lengths)
    }

    pub fn sign(&self) -> i64 {
        let ct = self.cycle_type();
        if (ct.size() - ct.length()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

fn check_labels(domain: &[usize]) -> Result<()> {
    if domain.iter().duplicates().next().is_some() {
        return crate::error::domain(format!("repeated labels in {domain:?}"));
    }
    Ok(())
}

fn domain_err_len<T>(domain: &[usize], images: &[usize]) -> Result<T> {
    crate::error::domain(format!("{} images for {} labels", images.len(), domain.len()))
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->{:?}", self.domain, self.images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(&[1, 2, 3]).cycle_type(), Partition::column(3));
        let t = Permutation::transposition(&[1, 2, 3], 1, 3).unwrap();
        assert_eq!(t.cycle_type(), "[2,1]".parse().unwrap());
        let c = Permutation::from_cycles(&[1, 2, 3, 4, 5], &[vec![2, 4, 5]]).unwrap();
        assert_eq!(c.cycle_type(), "[3,1,1]".parse().unwrap());
        assert_eq!(c.sign(), 1);
        assert_eq!(t.sign(), -1);
    }

    #[test]
    fn group_laws() {
        let dom = [2, 5, 7, 9];
        let all = Permutation::all(&dom);
        assert_eq!(all.len(), 24);
        let id = Permutation::identity(&dom);
        for a in &all {
            assert_eq!(a.compose(&a.inverse()).unwrap(), id);
            for b in all.iter().step_by(5) {
                for c in all.iter().step_by(7) {
                    let left = a.compose(b).unwrap().compose(c).unwrap();
                    let right = a.compose(&b.compose(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn composition_order() {
        let dom = [1, 2, 3];
        let s = Permutation::transposition(&dom, 1, 2).unwrap();
        let t = Permutation::transposition(&dom, 2, 3).unwrap();
        // (s ∘ t)(3) = s(2) = 1
        assert_eq!(s.compose(&t).unwrap().apply(3), Some(1));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 2], &[1, 1]).is_err());
        assert!(Permutation::from_images(&[1, 1], &[1, 1]).is_err());
        assert!(Permutation::transposition(&[1, 2], 1, 3).is_err());
    }
}
