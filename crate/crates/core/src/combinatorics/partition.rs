use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg;
use crate::scalar::{factorial, factorial_q, Rational};

/// Weakly decreasing sequence of positive integers (trailing zeros stripped).
///
/// Ordered graded-lexicographically: by size first, then lexicographically on
/// the parts, so `[] < [1] < [1,1] < [2] < [1,1,1] < [2,1] < [3]`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("parts {parts:?} are not weakly decreasing"));
        }
        if parts.contains(&0) {
            return domain(format!("zero part inside {parts:?}"));
        }
        Ok(Partition(parts))
    }

    /// Sorts arbitrary positive parts into a partition (used for cycle types).
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The single row `(m)`.
    pub fn row(m: usize) -> Self {
        if m == 0 {
            Self::empty()
        } else {
            Partition(vec![m])
        }
    }

    /// The single column `(1^m)`.
    pub fn column(m: usize) -> Self {
        Partition(vec![1; m])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ_i` with 1-based `i`; zero past the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// First part `λ_1` (zero for the empty partition).
    pub fn first(&self) -> usize {
        self.part(1)
    }

    pub fn conjugate(&self) -> Self {
        let width = self.first();
        let parts = (1..=width).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect();
        Partition(parts)
    }

    /// Diagram containment `μ ⊆ λ`.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.length() <= self.length() && mu.0.iter().zip(&self.0).all(|(m, l)| m <= l)
    }

    /// Hook length formula for the number of standard Young tableaux.
    pub fn syt_count(&self) -> BigInt {
        let conj = self.conjugate();
        let mut hooks = BigInt::one();
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.0[j] - i - 1;
                hooks *= BigInt::from(arm + leg + 1);
            }
        }
        factorial(self.size()) / hooks
    }

    /// All partitions of `m` in ascending lexicographic order.
    pub fn all_of_size(m: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fill(m, m, &mut current, &mut out);
        out.sort();
        out
    }

    /// All partitions of size at most `bound`, graded-lex ordered.
    pub fn up_to(bound: usize) -> Vec<Partition> {
        (0..=bound).flat_map(Self::all_of_size).collect()
    }

    /// Partitions of size at most `bound` with at most `max_len` parts.
    pub fn up_to_with_length(bound: usize, max_len: usize) -> Vec<Partition> {
        Self::up_to(bound).into_iter().filter(|p| p.length() <= max_len).collect()
    }

    /// `z_λ = Π_i i^{m_i} m_i!`, the centralizer order of cycle type λ.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let part = self.0[i];
            let mult = self.0[i..].iter().take_while(|&&p| p == part).count();
            z *= num_traits::pow(BigInt::from(part), mult) * factorial(mult);
            i += mult;
        }
        z
    }
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

/// Number of standard Young tableaux of skew shape `λ/μ`, from the
/// determinant `|λ/μ|! · det(1 / (λ_i − μ_j − i + j)!)`.
pub fn skew_syt_count(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if !lambda.contains(mu) {
        return domain(format!("{mu} is not contained in {lambda}"));
    }
    let l = lambda.length();
    if l == 0 {
        return Ok(BigInt::one());
    }
    let matrix: Vec<Vec<Rational>> = (1..=l)
        .map(|i| {
            (1..=l)
                .map(|j| {
                    let e = lambda.part(i) as i64 - mu.part(j) as i64 - i as i64 + j as i64;
                    if e < 0 {
                        Rational::zero()
                    } else {
                        factorial_q(e as usize).recip()
                    }
                })
                .collect()
        })
        .collect();
    let det = linalg::det_field(&matrix);
    let count = det * factorial_q(lambda.size() - mu.size());
    if !count.is_integer() {
        return Err(Error::IdentityViolation(format!(
            "skew tableau count for {lambda}/{mu} is not an integer: {count}"
        )));
    }
    Ok(count.to_integer())
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"2,1"`, `"[2, 1]"`, `"[]"` and the empty string.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad partition {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn canonical_form_and_validation() {
        assert_eq!(part(&[4, 1, 1, 0, 0]), part(&[4, 1, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!("[2, 1]".parse::<Partition>().unwrap(), part(&[2, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
    }

    #[test]
    fn conjugates() {
        assert_eq!(Partition::row(5).conjugate(), Partition::column(5));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
        for p in Partition::up_to(7) {
            let c = p.conjugate();
            assert_eq!(c.conjugate(), p);
            assert_eq!(c.size(), p.size());
            assert_eq!(c.length(), p.first());
        }
    }

    #[test]
    fn graded_lex_order() {
        let names: Vec<String> = Partition::up_to(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["[]", "[1]", "[1,1]", "[2]", "[1,1,1]", "[2,1]", "[3]"]);
        assert_eq!(Partition::all_of_size(6).len(), 11);
    }

    #[test]
    fn hook_lengths() {
        assert_eq!(Partition::empty().syt_count(), BigInt::one());
        assert_eq!(Partition::column(6).syt_count(), BigInt::one());
        assert_eq!(part(&[2, 1]).syt_count(), BigInt::from(2));
        assert_eq!(part(&[3, 2]).syt_count(), BigInt::from(5));
    }

    #[test]
    fn skew_counts() {
        let l = part(&[3, 2, 1]);
        assert_eq!(skew_syt_count(&l, &l).unwrap(), BigInt::one());
        assert_eq!(skew_syt_count(&l, &Partition::empty()).unwrap(), l.syt_count());
        assert_eq!(skew_syt_count(&part(&[2, 1]), &part(&[1])).unwrap(), BigInt::from(2));
        assert!(matches!(skew_syt_count(&part(&[2]), &part(&[1, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn centralizer_orders() {
        assert_eq!(part(&[1, 1, 1]).centralizer_order(), BigInt::from(6));
        assert_eq!(part(&[2, 2]).centralizer_order(), BigInt::from(8));
        assert_eq!(part(&[3, 1]).centralizer_order(), BigInt::from(3));
    }
}
