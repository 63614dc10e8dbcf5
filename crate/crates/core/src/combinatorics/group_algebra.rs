use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{irreducible_character, Partition, Permutation};
use crate::error::{domain, Result};
use crate::scalar::{int, Rational};

/// Finite rational combination of permutations of one ordered label set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    domain: Vec<usize>,
    terms: BTreeMap<Permutation, Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(domain: &[usize]) -> Self {
        GroupAlgebraElement { domain: domain.to_vec(), terms: BTreeMap::new() }
    }

    /// Unit element; for an empty domain this is the empty-product unit.
    pub fn identity(domain: &[usize]) -> Self {
        Self::from_permutation(Permutation::identity(domain), Rational::one())
    }

    pub fn from_permutation(p: Permutation, coeff: Rational) -> Self {
        let mut e = Self::zero(p.domain());
        e.add_term(p, coeff);
        e
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, Rational> {
        &self.terms
    }

    pub fn coeff(&self, p: &Permutation) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: Permutation, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return domain(format!("group algebra elements over {:?} and {:?}", self.domain, other.domain));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.domain);
        for (p, v) in &self.terms {
            out.add_term(p.clone(), v * c);
        }
        out
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let mut out = Self::zero(&self.domain);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.compose(q)?, a * b);
            }
        }
        Ok(out)
    }

    /// Commutes with every permutation of the domain. Adjacent transpositions
    /// generate the group, so checking those suffices.
    pub fn is_central(&self) -> bool {
        self.domain.windows(2).all(|w| {
            let s =
                Self::from_permutation(Permutation::transposition(&self.domain, w[0], w[1]).unwrap(), Rational::one());
            s.mul(self).unwrap() == self.mul(&s).unwrap()
        })
    }
}

/// `α_λ^(K) = Σ_{σ ∈ S_K} χ^λ(σ) σ`.
pub fn alpha_element(lambda: &Partition, labels: &[usize]) -> Result<GroupAlgebraElement> {
    if lambda.size() != labels.len() {
        return domain(format!("alpha element of {lambda} needs {} labels, got {}", lambda.size(), labels.len()));
    }
    let mut out = GroupAlgebraElement::zero(labels);
    for p in Permutation::all(labels) {
        let chi = irreducible_character(lambda, &p.cycle_type())?;
        out.add_term(p, int(chi));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_alphas() {
        let a1 = alpha_element(&Partition::row(1), &[4]).unwrap();
        assert_eq!(a1, GroupAlgebraElement::identity(&[4]));
        let s = Permutation::transposition(&[2, 5], 2, 5).unwrap();
        let a2 = alpha_element(&Partition::row(2), &[2, 5]).unwrap();
        assert_eq!(a2.coeff(&s), int(1));
        let a11 = alpha_element(&Partition::column(2), &[2, 5]).unwrap();
        assert_eq!(a11.coeff(&s), int(-1));
        assert_eq!(a11.coeff(&Permutation::identity(&[2, 5])), int(1));
        let empty = alpha_element(&Partition::empty(), &[]).unwrap();
        assert_eq!(empty, GroupAlgebraElement::identity(&[]));
        assert!(alpha_element(&Partition::row(2), &[1]).is_err());
    }

    #[test]
    fn central_and_idempotent_up_to_scale() {
        for m in 0..=4 {
            let labels: Vec<usize> = (1..=m).map(|k| 2 * k + 1).collect();
            for l in Partition::all_of_size(m) {
                let a = alpha_element(&l, &labels).unwrap();
                assert!(a.is_central());
                let scale = Rational::new(crate::scalar::factorial(m), l.syt_count());
                assert_eq!(a.mul(&a).unwrap(), a.scale(&scale));
            }
        }
    }

    #[test]
    fn non_central_detected() {
        let dom = [1, 2, 3];
        let s = Permutation::transposition(&dom, 1, 2).unwrap();
        assert!(!GroupAlgebraElement::from_permutation(s, int(1)).is_central());
    }
}
