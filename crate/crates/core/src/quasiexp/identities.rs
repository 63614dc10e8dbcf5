use num_traits::{One, Zero};

use super::space::polynomial_partition_bound;
use super::{ExpSum, QuasiExp, QuasiExpSpace};
use crate::combinatorics::{skew_syt_count, Partition};
use crate::error::{domain, Error, Result};
use crate::linalg::det_ring;
use crate::report::Report;
use crate::scalar::{binomial_q, factorial_q, pow_q, Rational};

fn require_nonzero_wronskian(v: &QuasiExpSpace, t: &Rational) -> Result<QuasiExp> {
    let wr = v.minor_function(&Partition::empty());
    if wr.eval(t).is_zero() {
        return Err(Error::Precondition(format!("t = {t} is a zero of the Wronskian")));
    }
    Ok(wr)
}

/// Compares `Δ_μ(V(u))` with `Σ_{λ⊇μ} f^{λ/μ}/(|λ|−|μ|)!·u^{|λ|−|μ|}·Δ_λ(V)`.
///
/// Taylor coefficients at `u = 0` are compared up to order `bound − |μ|`.
/// When `V` is polynomial and `bound` covers every nonzero `Δ_λ(V)`, both
/// sides are also evaluated at `t` and must agree exactly.
pub fn verify_translation_identity(v: &QuasiExpSpace, mu: &Partition, t: &Rational, bound: usize) -> Result<Report> {
    if mu.size() > bound {
        return domain(format!("|μ| = {} exceeds the bound {bound}", mu.size()));
    }
    let mut report = Report::new("translation");
    let lhs = v.minor_function(mu);
    let at_zero = v.plucker_vector(&Rational::zero(), bound);
    let orders = bound - mu.size() + 1;
    let lhs_taylor = lhs.taylor_at(&Rational::zero(), orders);
    let mut rhs_taylor = vec![ExpSum::zero(); orders];
    for (lambda, value) in at_zero.entries() {
        if value.is_zero() || !lambda.contains(mu) {
            continue;
        }
        let j = lambda.size() - mu.size();
        let f = Rational::from_integer(skew_syt_count(lambda, mu)?);
        rhs_taylor[j] = rhs_taylor[j].clone() + value.scale(&(f / factorial_q(j)));
    }
    for (j, (a, b)) in lhs_taylor.iter().zip(&rhs_taylor).enumerate() {
        report.check(format!("{mu} coefficient t^{j}"), a == b, format!("{a} vs {b}"));
    }
    let complete = polynomial_partition_bound(v).is_some_and(|b| b <= bound);
    if complete {
        let direct = lhs.eval(t);
        let series = rhs_taylor.iter().enumerate().fold(ExpSum::zero(), |acc, (j, c)| acc + c.scale(&pow_q(t, j)));
        report.check(format!("{mu} at t = {t}"), direct == series, format!("{direct} vs {series}"));
    } else {
        report.warn(format!("{mu}: sum over λ is truncated at |λ| ≤ {bound}; checked as a congruence in t"));
    }
    Ok(report)
}

/// `Δ_λ(V(u))·Δ_∅(V(u))^{m−1} = det(Σ_k (−1)^k C(j−1,k) ∂^k F(index(i,j,k)))`
/// as an identity of functions, plus at `u = t`.
fn jacobi_trudi_check(
    v: &QuasiExpSpace,
    lambda: &Partition,
    m: usize,
    t: &Rational,
    single: impl Fn(usize) -> Partition,
    index: impl Fn(usize, usize, usize) -> i64,
    name: &str,
) -> Result<Report> {
    let wr = require_nonzero_wronskian(v, t)?;
    let mut report = Report::new(name);
    let target = v.minor_function(lambda);
    let mut cache: Vec<Option<Vec<QuasiExp>>> = Vec::new();
    let mut entry_fn = |c: i64, k: usize| -> QuasiExp {
        if c < 0 {
            return QuasiExp::zero();
        }
        let c = c as usize;
        if cache.len() <= c {
            cache.resize(c + 1, None);
        }
        let derivs = cache[c].get_or_insert_with(|| {
            let f = v.minor_function(&single(c));
            let mut out = vec![f];
            for _ in 1..m.max(1) {
                let next = out.last().unwrap().derivative();
                out.push(next);
            }
            out
        });
        derivs[k].clone()
    };
    let mut matrix = vec![vec![QuasiExp::zero(); m]; m];
    for i in 1..=m {
        for j in 1..=m {
            let mut acc = QuasiExp::zero();
            for k in 0..j {
                let coef = binomial_q(j - 1, k) * if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                acc = acc + entry_fn(index(i, j, k), k).scale(&ExpSum::rational(coef));
            }
            matrix[i - 1][j - 1] = acc;
        }
    }
    let det = det_ring(&matrix);
    let (lhs, rhs) = if m == 0 {
        (target, wr)
    } else {
        let mut lhs = target;
        for _ in 1..m {
            lhs = lhs * wr.clone();
        }
        (lhs, det)
    };
    report.check(format!("{lambda} m={m} as functions"), lhs == rhs, "");
    let (a, b) = (lhs.eval(t), rhs.eval(t));
    report.check(format!("{lambda} m={m} at t={t}"), a == b, format!("{a} vs {b}"));
    Ok(report)
}

/// Jacobi–Trudi identity over single-row coordinates `Δ_{(c)}`, `m ≥ ℓ(λ)`.
pub fn verify_jacobi_trudi(v: &QuasiExpSpace, lambda: &Partition, m: usize, t: &Rational) -> Result<Report> {
    if m < lambda.length() {
        return domain(format!("m = {m} is below ℓ(λ) = {}", lambda.length()));
    }
    jacobi_trudi_check(
        v,
        lambda,
        m,
        t,
        Partition::row,
        |i, j, k| lambda.part(i) as i64 - i as i64 + j as i64 - k as i64,
        "jt",
    )
}

/// Dual Jacobi–Trudi identity over single-column coordinates `Δ_{(1^c)}`,
/// `m ≥ λ_1`.
pub fn verify_dual_jacobi_trudi(v: &QuasiExpSpace, lambda: &Partition, m: usize, t: &Rational) -> Result<Report> {
    if m < lambda.first() {
        return domain(format!("m = {m} is below λ_1 = {}", lambda.first()));
    }
    let conj = lambda.conjugate();
    jacobi_trudi_check(
        v,
        lambda,
        m,
        t,
        Partition::column,
        |i, j, k| conj.part(i) as i64 - i as i64 + j as i64 - k as i64,
        "dual-jt",
    )
}
