//! Schur polynomials and power sums evaluated at eigenvalue lists.

use num_traits::Zero;

use crate::combinatorics::{irreducible_character, Partition};
use crate::error::{domain, Result};
use crate::linalg::{det_field, det_ring};
use crate::scalar::{Rational, Ring, Scalar};

/// `p_k(h) = h_1^k + … + h_N^k` for `k ≥ 1`.
pub fn power_sum<R: Ring>(k: usize, h: &[R]) -> Result<R> {
    if k == 0 {
        return domain("power sums start at k = 1");
    }
    Ok(h.iter().fold(R::zero(), |acc, x| acc + pow(x, k)))
}

/// `p_μ(h) = Π_i p_{μ_i}(h)`; `p_∅ = 1`.
pub fn power_sum_product<R: Ring>(mu: &Partition, h: &[R]) -> R {
    mu.parts().iter().fold(R::one(), |acc, &k| acc * power_sum(k, h).unwrap())
}

fn pow<R: Ring>(x: &R, k: usize) -> R {
    (0..k).fold(R::one(), |acc, _| acc * x.clone())
}

/// `s_λ(h_1, …, h_N)` by branching over horizontal strips,
/// `s_λ(x_1..x_N) = Σ_μ x_N^{|λ/μ|} s_μ(x_1..x_{N-1})`. Division-free, so valid
/// for repeated eigenvalues; zero when `ℓ(λ) > N`.
pub fn schur_eval<R: Ring>(lambda: &Partition, h: &[R]) -> R {
    branch(lambda.parts(), h)
}

fn branch<R: Ring>(lambda: &[usize], h: &[R]) -> R {
    if lambda.is_empty() {
        return R::one();
    }
    let Some((last, rest)) = h.split_last() else {
        return R::zero();
    };
    if lambda.len() > h.len() {
        return R::zero();
    }
    let size: usize = lambda.iter().sum();
    let mut total = R::zero();
    let mut mu = vec![0; lambda.len()];
    strips(lambda, 0, &mut mu, &mut |mu: &[usize]| {
        let mut trimmed = mu.to_vec();
        while trimmed.last() == Some(&0) {
            trimmed.pop();
        }
        let removed = size - trimmed.iter().sum::<usize>();
        let inner = branch(&trimmed, rest);
        if !inner.is_zero() {
            total = total.clone() + pow(last, removed) * inner;
        }
    });
    total
}

/// Enumerates `μ` with `λ_{i+1} ≤ μ_i ≤ λ_i`.
fn strips(lambda: &[usize], i: usize, mu: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if i == lambda.len() {
        visit(mu);
        return;
    }
    let lo = lambda.get(i + 1).copied().unwrap_or(0);
    for v in lo..=lambda[i] {
        mu[i] = v;
        strips(lambda, i + 1, mu, visit);
    }
}

/// Coefficients `χ^λ(μ)/z_μ` of `s_λ = Σ_μ (χ^λ(μ)/z_μ) p_μ`, over all `μ ⊢ |λ|`
/// (class-size weighting of the sum over the symmetric group).
pub fn power_sum_expansion(lambda: &Partition) -> Vec<(Partition, Rational)> {
    Partition::all_of_size(lambda.size())
        .into_iter()
        .filter_map(|mu| {
            let chi = irreducible_character(lambda, &mu).unwrap();
            if chi == 0 {
                return None;
            }
            let c = Rational::new(chi.into(), mu.centralizer_order());
            Some((mu, c))
        })
        .collect()
}

/// `s_λ(h) = (1/m!) Σ_σ χ^λ(σ) p_{cyc σ}(h)`, summed over cycle types.
pub fn schur_via_power_sums<S: Scalar>(lambda: &Partition, h: &[S]) -> S {
    power_sum_expansion(lambda)
        .iter()
        .fold(S::zero(), |acc, (mu, c)| acc + S::from_rational(c) * power_sum_product(mu, h))
}

/// Bialternant ratio `det(h_j^{λ_i+N-i}) / det(h_j^{N-i})`; `None` when the
/// eigenvalues are not distinct.
pub fn schur_bialternant(lambda: &Partition, h: &[Rational]) -> Option<Rational> {
    let n = h.len();
    if lambda.length() > n {
        return Some(Rational::zero());
    }
    let vander: Vec<Vec<Rational>> = (1..=n).map(|i| h.iter().map(|x| pow(x, n - i)).collect()).collect();
    let den = det_field(&vander);
    if den.is_zero() {
        return None;
    }
    let num: Vec<Vec<Rational>> = (1..=n).map(|i| h.iter().map(|x| pow(x, lambda.part(i) + n - i)).collect()).collect();
    Some(det_field(&num) / den)
}

/// `det(s_{(λ_i - i + j)})_{m×m}` for `m ≥ ℓ(λ)`.
pub fn schur_jacobi_trudi<R: Ring>(lambda: &Partition, h: &[R], m: usize) -> R {
    let entry = |k: i64| {
        if k < 0 {
            R::zero()
        } else {
            schur_eval(&Partition::row(k as usize), h)
        }
    };
    let mat: Vec<Vec<R>> =
        (1..=m).map(|i| (1..=m).map(|j| entry(lambda.part(i) as i64 - i as i64 + j as i64)).collect()).collect();
    det_ring(&mat)
}

/// `det(s_{(1^{λ'_i - i + j})})_{m×m}` for `m ≥ λ_1`.
pub fn schur_dual_jacobi_trudi<R: Ring>(lambda: &Partition, h: &[R], m: usize) -> R {
    let conj = lambda.conjugate();
    let entry = |k: i64| {
        if k < 0 {
            R::zero()
        } else {
            schur_eval(&Partition::column(k as usize), h)
        }
    };
    let mat: Vec<Vec<R>> =
        (1..=m).map(|i| (1..=m).map(|j| entry(conj.part(i) as i64 - i as i64 + j as i64)).collect()).collect();
    det_ring(&mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn power_sums() {
        assert_eq!(power_sum(3, &[int(1), int(2)]).unwrap(), int(9));
        assert_eq!(power_sum(2, &[int(1), int(1)]).unwrap(), int(2));
        assert!(power_sum::<Rational>(0, &[int(1)]).is_err());
    }

    #[test]
    fn schur_small_cases() {
        let h = [int(1), int(1)];
        assert_eq!(schur_eval(&p("2,1"), &h), int(2));
        assert_eq!(schur_eval(&Partition::empty(), &h), int(1));
        assert_eq!(schur_eval(&p("1"), &[int(3), int(4), int(-2)]), int(5));
        assert_eq!(schur_eval(&p("1,1,1"), &h), int(0));
        // s_(2,1)(x,y,z) has 8 monomials
        assert_eq!(schur_eval(&p("2,1"), &[int(1), int(1), int(1)]), int(8));
    }

    #[test]
    fn power_sum_examples() {
        let h = [rat(1, 2), int(3), int(-1)];
        let p1 = power_sum(1, &h).unwrap();
        let p2 = power_sum(2, &h).unwrap();
        let half = rat(1, 2);
        assert_eq!(schur_via_power_sums(&p("2"), &h), (&p1 * &p1 + &p2) * &half);
        assert_eq!(schur_via_power_sums(&p("1,1"), &h), (&p1 * &p1 - &p2) * &half);
        assert_eq!(schur_via_power_sums(&Partition::empty(), &h), int(1));
    }

    #[test]
    fn routes_agree() {
        let h = [rat(1, 2), int(3), rat(-2, 3)];
        for l in Partition::up_to(5) {
            let a = schur_eval(&l, &h);
            assert_eq!(a, schur_via_power_sums(&l, &h), "{l}");
            assert_eq!(Some(a.clone()), schur_bialternant(&l, &h), "{l}");
            let m = l.length().max(1);
            assert_eq!(a, schur_jacobi_trudi(&l, &h, m), "{l}");
            assert_eq!(a, schur_jacobi_trudi(&l, &h, m + 2), "{l}");
            assert_eq!(a, schur_dual_jacobi_trudi(&l, &h, l.first().max(1) + 1), "{l}");
        }
    }

    #[test]
    fn bialternant_needs_distinct_values() {
        assert_eq!(schur_bialternant(&p("1"), &[int(2), int(2)]), None);
    }

    #[test]
    fn float_backend() {
        let h = [0.5, 3.0];
        let v = schur_via_power_sums(&p("2,1"), &h);
        assert!((v - schur_eval(&p("2,1"), &h)).abs() < 1e-12);
    }
}
