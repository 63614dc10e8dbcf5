//! Matrix derivatives by multilinear ε-coefficient extraction.
//!
//! For factor positions `0..k`, the matrix `M = h + Σ_p ε_p X^{(p)}` has
//! entries `M_{a,b} = h_a δ_{ab} + Σ_p ε_p E^{(p)}_{b,a}`. Expanding a
//! trace-power expression in `M` with `ε_p² = 0` gives, as the coefficient of
//! `Π_{p∈S} ε_p`, exactly `d_S f(h)`. Operator factors in one monomial sit on
//! distinct tensor positions, so they commute and products are well defined.
//!
//! An operator on positions `S` is stored sparsely: row and column multi-indices
//! are encoded in base `N+1`, digit `i+1` at position `p ∈ S` and digit `0`
//! elsewhere, so products over disjoint position sets add codes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::combinatorics::Partition;
use crate::error::{domain, Result};
use crate::scalar::Rational;
use crate::tensor::{flatten, TensorOperator};

type Sparse = BTreeMap<(u64, u64), Rational>;

#[derive(Clone, Debug, Default)]
struct Eps {
    /// mask of ε-positions → sparse operator on those positions
    terms: BTreeMap<u32, Sparse>,
}

impl Eps {
    fn constant(c: Rational) -> Self {
        let mut e = Eps::default();
        if !c.is_zero() {
            e.terms.entry(0).or_default().insert((0, 0), c);
        }
        e
    }

    fn add_assign(&mut self, other: &Eps) {
        for (&mask, ops) in &other.terms {
            let slot = self.terms.entry(mask).or_default();
            for (key, v) in ops {
                accumulate(slot, *key, v.clone());
            }
        }
        self.terms.retain(|_, ops| !ops.is_empty());
    }

    fn mul(&self, other: &Eps) -> Eps {
        let mut out = Eps::default();
        for (&m1, ops1) in &self.terms {
            for (&m2, ops2) in &other.terms {
                if m1 & m2 != 0 {
                    continue;
                }
                let slot = out.terms.entry(m1 | m2).or_default();
                for (&(r1, c1), v1) in ops1 {
                    for (&(r2, c2), v2) in ops2 {
                        accumulate(slot, (r1 + r2, c1 + c2), v1 * v2);
                    }
                }
            }
        }
        out.terms.retain(|_, ops| !ops.is_empty());
        out
    }

    fn scale(&self, c: &Rational) -> Eps {
        let mut out = self.clone();
        for ops in out.terms.values_mut() {
            for v in ops.values_mut() {
                *v *= c;
            }
        }
        out.terms.retain(|_, ops| {
            ops.retain(|_, v| !v.is_zero());
            !ops.is_empty()
        });
        out
    }
}

fn accumulate(slot: &mut Sparse, key: (u64, u64), v: Rational) {
    if v.is_zero() {
        return;
    }
    let e = slot.entry(key).or_insert_with(Rational::zero);
    *e += v;
    if e.is_zero() {
        slot.remove(&key);
    }
}

fn mat_mul(a: &[Vec<Eps>], b: &[Vec<Eps>]) -> Vec<Vec<Eps>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Eps::default();
                    for k in 0..n {
                        acc.add_assign(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Every multilinear ε-coefficient of `f(h + Σ_p ε_p E_{j_p,i_p})` at once, for
/// `f = Σ_μ c_μ Π_i Tr(h^{μ_i})`.
pub(crate) struct DerivativeTable {
    n_dim: usize,
    positions: usize,
    f: Eps,
}

impl DerivativeTable {
    pub(crate) fn new(expr: &[(Partition, Rational)], h: &[Rational], positions: usize) -> Result<Self> {
        let n_dim = h.len();
        if n_dim == 0 {
            return domain("matrix derivative needs at least one eigenvalue");
        }
        if positions > 16 {
            return domain("matrix derivative limited to 16 tensor factors");
        }
        let base = (n_dim + 1) as u64;
        let place: Vec<u64> = (0..positions).map(|p| base.pow(p as u32)).collect();
        let mut m: Vec<Vec<Eps>> = (0..n_dim)
            .map(|a| (0..n_dim).map(|b| if a == b { Eps::constant(h[a].clone()) } else { Eps::default() }).collect())
            .collect();
        for (p, &pl) in place.iter().enumerate() {
            for a in 0..n_dim {
                for b in 0..n_dim {
                    // ε_p E^{(p)}_{b,a} at matrix position (a, b)
                    let key = ((b as u64 + 1) * pl, (a as u64 + 1) * pl);
                    m[a][b].terms.entry(1 << p).or_default().insert(key, Rational::one());
                }
            }
        }
        let max_power = expr.iter().map(|(mu, _)| mu.first()).max().unwrap_or(0);
        let mut traces: Vec<Eps> = Vec::with_capacity(max_power);
        let mut power = m.clone();
        for k in 1..=max_power {
            if k > 1 {
                power = mat_mul(&power, &m);
            }
            let mut tr = Eps::default();
            for (a, row) in power.iter().enumerate() {
                tr.add_assign(&row[a]);
            }
            traces.push(tr);
        }
        let mut f = Eps::default();
        for (mu, c) in expr {
            let term = mu.parts().iter().fold(Eps::constant(Rational::one()), |acc, &k| acc.mul(&traces[k - 1]));
            f.add_assign(&term.scale(c));
        }
        Ok(DerivativeTable { n_dim, positions, f })
    }

    /// `d_S f(h)` as a dense operator on `labels`, where `labels[p]` names
    /// position `p` and `mask` selects `S`; identity on unselected positions.
    pub(crate) fn operator(&self, mask: u32, labels: &[usize]) -> Result<TensorOperator<Rational>> {
        assert_eq!(labels.len(), self.positions);
        let mut op = TensorOperator::zero(labels, self.n_dim)?;
        let Some(ops) = self.f.terms.get(&mask) else {
            return Ok(op);
        };
        let base = (self.n_dim + 1) as u64;
        let selected: Vec<usize> = (0..self.positions).filter(|p| mask & (1 << p) != 0).collect();
        let others: Vec<usize> = (0..self.positions).filter(|p| mask & (1 << p) == 0).collect();
        let d = op.dim();
        let mut entries = op.entries().to_vec();
        let mut digits_r = vec![0; self.positions];
        let mut digits_c = vec![0; self.positions];
        let spectators = self.n_dim.pow(others.len() as u32);
        for (&(rc, cc), v) in ops {
            for &p in &selected {
                let pl = base.pow(p as u32);
                digits_r[p] = ((rc / pl) % base) as usize - 1;
                digits_c[p] = ((cc / pl) % base) as usize - 1;
            }
            for s in 0..spectators {
                let mut rest = s;
                for &p in others.iter().rev() {
                    digits_r[p] = rest % self.n_dim;
                    digits_c[p] = digits_r[p];
                    rest /= self.n_dim;
                }
                let r = flatten(&digits_r, self.n_dim);
                let c = flatten(&digits_c, self.n_dim);
                entries[r * d + c] += v;
            }
        }
        op = TensorOperator::from_entries(labels, self.n_dim, entries)?;
        Ok(op)
    }
}

/// `d_K f(h)` for `f = Σ_μ c_μ Π_i Tr(h^{μ_i})` and diagonal `h`, as an
/// operator on the factors `K` (in the given order).
pub fn matrix_derivative(
    expr: &[(Partition, Rational)],
    k: &[usize],
    h: &[Rational],
) -> Result<TensorOperator<Rational>> {
    let table = DerivativeTable::new(expr, h, k.len())?;
    let full = if k.is_empty() { 0 } else { (1u32 << k.len()) - 1 };
    table.operator(full, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Permutation;
    use crate::scalar::{int, rat};
    use crate::symfunc::power_sum_expansion;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn constant_has_no_derivative() {
        let one = vec![(Partition::empty(), int(1))];
        let d = matrix_derivative(&one, &[1], &[int(2), int(3)]).unwrap();
        assert!(d.is_zero());
        let d0 = matrix_derivative(&one, &[], &[int(2), int(3)]).unwrap();
        assert_eq!(d0.entries(), &[int(1)]);
    }

    #[test]
    fn powers_of_the_trace() {
        let h = [int(2), rat(1, 3)];
        let tr = &h[0] + &h[1];
        for k in 1..=3 {
            let expr = vec![(Partition::column(k), int(1))];
            let d = matrix_derivative(&expr, &[4], &h).unwrap();
            let expected = TensorOperator::scalar(&[4], 2, int(k as i64) * crate::scalar::pow_q(&tr, k - 1)).unwrap();
            assert_eq!(d, expected);
        }
    }

    #[test]
    fn second_power_sum() {
        let h = [int(2), int(-5), rat(1, 2)];
        let expr = vec![(p("2"), rat(1, 2))];
        let d1 = matrix_derivative(&expr, &[1], &h).unwrap();
        assert_eq!(d1, TensorOperator::diagonal_h_action(&h, &[1], &[1]).unwrap());
        let d12 = matrix_derivative(&expr, &[1, 2], &h).unwrap();
        let swap = Permutation::transposition(&[1, 2], 1, 2).unwrap();
        assert_eq!(d12, TensorOperator::permutation_operator(&swap, &[1, 2], 3).unwrap());
    }

    #[test]
    fn order_of_factors_is_immaterial() {
        let h = [int(1), int(3)];
        let expr = power_sum_expansion(&p("2,1"));
        let a = matrix_derivative(&expr, &[1, 2, 3], &h).unwrap();
        let b = matrix_derivative(&expr, &[2, 1, 3], &h).unwrap();
        assert_eq!(a, b.embed(&[1, 2, 3]).unwrap());
    }
}
