//! Seeded generators for instances, evaluation points and function spaces.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::gaudin::GaudinInstance;
use crate::poly::Poly;
use crate::quasiexp::QuasiExpSpace;
use crate::scalar::{rat, Rational};

const DENOMINATORS: [i64; 4] = [1, 2, 3, 4];

/// Uniform rational in `[lo, hi]` with denominator in `{1, 2, 3, 4}`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    let d = *DENOMINATORS.choose(rng).unwrap();
    rat(rng.gen_range(lo * d..=hi * d), d)
}

/// `count` distinct rationals in `[lo, hi]`.
pub fn distinct_rationals<R: Rng>(rng: &mut R, count: usize, lo: i64, hi: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let x = random_rational(rng, lo, hi);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Arbitrary `h, z ∈ [−2, 2]`.
pub fn random_instance<R: Rng>(rng: &mut R, n_dim: usize, n: usize) -> GaudinInstance {
    let h = (0..n_dim).map(|_| random_rational(rng, -2, 2)).collect();
    let z = (0..n).map(|_| random_rational(rng, -2, 2)).collect();
    GaudinInstance::new(h, z).expect("consistent sizes")
}

/// `h_i ≥ 0`, `z ∈ [−2, 2]` and `t ≥ max(−z_k)`. With `strict`, `h_i > 0`
/// and `t > max(−z_k)`; otherwise `h` may contain zeros and `t` may sit on
/// the boundary.
pub fn random_admissible<R: Rng>(rng: &mut R, n_dim: usize, n: usize, strict: bool) -> (GaudinInstance, Rational) {
    let h: Vec<Rational> = (0..n_dim)
        .map(|_| if strict { random_rational(rng, 0, 2).max(rat(1, 4)) } else { random_rational(rng, 0, 2) })
        .collect();
    let z: Vec<Rational> = (0..n).map(|_| random_rational(rng, -2, 2)).collect();
    let floor = z.iter().map(|x| -x).max().unwrap_or_else(Rational::zero);
    let offset = if strict { rat(rng.gen_range(1..=4), 4) } else { rat(rng.gen_range(0..=4), 4) };
    (GaudinInstance::new(h, z).expect("consistent sizes"), floor + offset)
}

/// Distinct `h_i ≥ 0` (or `h = 0`), distinct `z ∈ [−2, 2]`, and
/// `t = max(−z_k) + 1/2`.
pub fn random_generic<R: Rng>(rng: &mut R, n_dim: usize, n: usize, zero_h: bool) -> (GaudinInstance, Rational) {
    let h = if zero_h { vec![Rational::zero(); n_dim] } else { distinct_rationals(rng, n_dim, 0, 2) };
    let z = distinct_rationals(rng, n, -2, 2);
    let t = z.iter().map(|x| -x).max().unwrap_or_else(Rational::zero) + rat(1, 2);
    (GaudinInstance::new(h, z).expect("consistent sizes"), t)
}

fn random_poly<R: Rng>(rng: &mut R, degree: usize) -> Poly<Rational> {
    let mut c: Vec<Rational> = (0..degree).map(|_| random_rational(rng, -2, 2)).collect();
    let mut lead = random_rational(rng, -2, 2);
    while lead.is_zero() {
        lead = random_rational(rng, -2, 2);
    }
    c.push(lead);
    Poly::new(c)
}

/// `N`-dimensional polynomial space with distinct basis degrees `≤ max_degree`.
pub fn random_polynomial_space<R: Rng>(rng: &mut R, n_dim: usize, max_degree: usize) -> QuasiExpSpace {
    let mut degrees: Vec<usize> = (0..=max_degree.max(n_dim - 1)).collect();
    degrees.shuffle(rng);
    let terms: Vec<(Rational, Poly<Rational>)> =
        degrees[..n_dim].iter().map(|&d| (Rational::zero(), random_poly(rng, d))).collect();
    QuasiExpSpace::from_exp_polys(&terms).expect("distinct degrees are independent")
}

/// `N`-dimensional space `⟨e^{h_i u} p_i(u)⟩` with exponents from
/// `{−1, 0, 1/2, 1}`, not all zero, and distinct degrees within each exponent.
pub fn random_quasi_space<R: Rng>(rng: &mut R, n_dim: usize, max_degree: usize) -> QuasiExpSpace {
    let choices = [rat(-1, 1), rat(0, 1), rat(1, 2), rat(1, 1)];
    loop {
        let exps: Vec<Rational> = (0..n_dim).map(|_| choices.choose(rng).unwrap().clone()).collect();
        if exps.iter().all(Zero::is_zero) {
            continue;
        }
        let mut used: Vec<(Rational, usize)> = Vec::new();
        let mut terms = Vec::with_capacity(n_dim);
        for c in exps {
            let mut d = rng.gen_range(0..=max_degree);
            while used.contains(&(c.clone(), d)) {
                d = (d + 1) % (max_degree + n_dim);
            }
            used.push((c.clone(), d));
            terms.push((c, random_poly(rng, d)));
        }
        if let Ok(v) = QuasiExpSpace::from_exp_polys(&terms) {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn admissible_instances_satisfy_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for strict in [false, true] {
            for _ in 0..50 {
                let (inst, t) = random_admissible(&mut rng, 2, 3, strict);
                assert!(inst.h.iter().all(|h| !h.is_negative() && (!strict || h.is_positive())));
                assert!(inst.z.iter().all(|z| !(&t + z).is_negative() && (!strict || (&t + z).is_positive())));
            }
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let a = random_quasi_space(&mut ChaCha8Rng::seed_from_u64(5), 3, 2);
        let b = random_quasi_space(&mut ChaCha8Rng::seed_from_u64(5), 3, 2);
        assert_eq!(a, b);
        let (g, t) = random_generic(&mut ChaCha8Rng::seed_from_u64(5), 2, 3, false);
        assert_ne!(g.h[0], g.h[1]);
        assert_eq!(t, -g.z.iter().min().unwrap() + rat(1, 2));
    }
}
