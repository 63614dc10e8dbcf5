//! Exact checks of the partial-trace identities relating `h^{(L)}`, the
//! factor-permuting action of `S_L`, power sums and Schur polynomials.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};

use super::matrix_derivative;
use crate::combinatorics::{alpha_element, GroupAlgebraElement, Partition, Permutation};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::report::Report;
use crate::scalar::{binomial_q, factorial_q, falling_factorial, Rational};
use crate::symfunc::{power_sum_product, schur_eval};
use crate::tensor::TensorOperator;

type Op = TensorOperator<Rational>;

/// Diagonal of `h^{(S)}` on the factors `l`.
fn h_diag(h: &[Rational], subset: &[usize], l: &[usize]) -> Result<Vec<Rational>> {
    Ok(Op::diagonal_h_action(h, subset, l)?.diagonal())
}

fn minus(l: &[usize], k: &[usize]) -> Vec<usize> {
    l.iter().copied().filter(|x| !k.contains(x)).collect()
}

/// `Σ_σ γ_σ p_{cyc(σ)}` grouped by cycle type.
fn trace_expression(gamma: &GroupAlgebraElement) -> Vec<(Partition, Rational)> {
    let mut acc: BTreeMap<Partition, Rational> = BTreeMap::new();
    for (sigma, c) in gamma.terms() {
        *acc.entry(sigma.cycle_type()).or_insert_with(Rational::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Subsets `K ⊆ L` with `|K| ≤ max_k`, including `K = ∅`.
fn small_subsets(l: &[usize], max_k: usize) -> Vec<Vec<usize>> {
    (0..=max_k.min(l.len())).flat_map(|s| l.iter().copied().combinations(s)).collect()
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 3 {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        for f in other.failures {
            if self.failures.len() < 3 {
                self.failures.push(f);
            }
        }
    }

    fn into_report(self, report: &mut Report, name: String) {
        let detail = if self.failures.is_empty() {
            format!("{} cases", self.cases)
        } else {
            format!("{} cases, first failures: {}", self.cases, self.failures.join("; "))
        };
        report.check(name, self.failures.is_empty(), detail);
    }
}

/// The five identities, for `|L| = 0..=max_l` and `|K| ≤ max_k`:
///
/// - (a) `Tr_L(h^{(L)}σ) = p_{cyc(σ)}(h)`
/// - (b) `Tr_L(h^{(L)}α_λ^{(L)}) = |λ|! s_λ(h)`
/// - (c) `d_K Tr_L(h^{(L)}γ) = (r)_{|K|} Tr_{L∖K}(h^{(L∖K)}γ)` for `γ = α_μ^{(L)}`
/// - (d) `Tr_{L∖K}(h^{(L∖K)}σ) = Tr_{L∖K}(σh^{(L∖K)})`
/// - (e) `Tr_{L∖K}(h^{(L)}σ) = h^{(K)}Tr_{L∖K}(h^{(L∖K)}σ)` and its mirror
///
/// plus the averaging identity
/// `Σ_{K⊆L⊆[m], |L|=r} Tr_L(h^{(L)}α_λ^{(L)}) = r! C(m-|K|, r-|K|) s_λ(h)`.
pub fn verify_trace_identities(h: &[Rational], max_l: usize, max_k: usize, exec: Execution) -> Result<Report> {
    let n_dim = h.len();
    if n_dim == 0 {
        return Err(Error::Domain("need at least one eigenvalue".into()));
    }
    let mut report = Report::new("trace-identities");
    for r in 0..=max_l {
        let l: Vec<usize> = (1..=r).collect();
        let hl = h_diag(h, &l, &l)?;
        let perms = Permutation::all(&l);
        let subsets = small_subsets(&l, max_k);

        // (a), (d), (e) over every permutation
        let tallies = par::map(exec, &perms, |sigma| -> Result<[Tally; 3]> {
            let mut t: [Tally; 3] = Default::default();
            let s = Op::permutation_operator(sigma, &l, n_dim)?;
            let full = s.scale_rows(&hl)?.trace();
            let expected = power_sum_product(&sigma.cycle_type(), h);
            t[0].record(full == expected, || format!("σ={sigma:?}"));
            for k in &subsets {
                let rest = minus(&l, k);
                let h_rest = h_diag(h, &rest, &l)?;
                let left = s.scale_rows(&h_rest)?.partial_trace(&rest)?;
                let right = s.scale_cols(&h_rest)?.partial_trace(&rest)?;
                t[1].record(left == right, || format!("σ={sigma:?} K={k:?}"));
                let hk = h_diag(h, k, k)?;
                let full_left = s.scale_rows(&hl)?.partial_trace(&rest)?;
                let full_right = s.scale_cols(&hl)?.partial_trace(&rest)?;
                let ok = full_left == left.scale_rows(&hk)? && full_right == left.scale_cols(&hk)?;
                t[2].record(ok, || format!("σ={sigma:?} K={k:?}"));
            }
            Ok(t)
        });
        let mut merged: [Tally; 3] = Default::default();
        for t in tallies {
            for (m, t) in merged.iter_mut().zip(t?) {
                m.merge(t);
            }
        }
        let [a, d, e] = merged;

        // (b), (c) and averaging over every λ ⊢ r
        let mut b = Tally::default();
        let mut c = Tally::default();
        let mut avg = Tally::default();
        for lambda in Partition::all_of_size(r) {
            let alpha = alpha_element(&lambda, &l)?;
            let a_op = Op::group_algebra_operator(&alpha, &l, n_dim)?;
            let full = a_op.scale_rows(&hl)?.trace();
            let s_lambda = schur_eval(&lambda, h);
            b.record(full == factorial_q(r) * &s_lambda, || format!("λ={lambda}"));

            let expr = trace_expression(&alpha);
            for k in &subsets {
                let lhs = matrix_derivative(&expr, k, h)?;
                let rest = minus(&l, k);
                let h_rest = h_diag(h, &rest, &l)?;
                let traced = a_op.scale_rows(&h_rest)?.partial_trace(&rest)?;
                let coef = Rational::from_integer(falling_factorial(r, k.len()));
                c.record(lhs == traced.scale(&coef), || format!("γ=α_{lambda} K={k:?}"));
            }

            let m = r + 1;
            for ksize in 0..=max_k.min(r) {
                let k: Vec<usize> = (1..=ksize).collect();
                let mut total = Rational::zero();
                for big in (1..=m).combinations(r) {
                    if !k.iter().all(|x| big.contains(x)) {
                        continue;
                    }
                    let a_big = Op::group_algebra_operator(&alpha_element(&lambda, &big)?, &big, n_dim)?;
                    total += a_big.scale_rows(&h_diag(h, &big, &big)?)?.trace();
                }
                let expected = factorial_q(r) * binomial_q(m - ksize, r - ksize) * &s_lambda;
                avg.record(total == expected, || format!("λ={lambda} |K|={ksize} m={m}"));
            }
        }

        a.into_report(&mut report, format!("(a) power sums, N={n_dim} |L|={r}"));
        b.into_report(&mut report, format!("(b) Schur, N={n_dim} |L|={r}"));
        c.into_report(&mut report, format!("(c) derivative, N={n_dim} |L|={r}"));
        d.into_report(&mut report, format!("(d) commute, N={n_dim} |L|={r}"));
        e.into_report(&mut report, format!("(e) factor, N={n_dim} |L|={r}"));
        avg.into_report(&mut report, format!("averaging, N={n_dim} |L|={r}"));
    }
    Ok(report)
}

/// The four equal expressions
/// `(h^{-1})^{(K)}Tr_{L∖K}(h^{(L)}α) = Tr_{L∖K}(h^{(L∖K)}α) = Tr_{L∖K}(αh^{(L∖K)}) = Tr_{L∖K}(αh^{(L)})(h^{-1})^{(K)}`
/// for every `λ ⊢ |L|`. Requires every `h_i ≠ 0`.
pub fn verify_four_ways(h: &[Rational], max_l: usize, max_k: usize) -> Result<Report> {
    if h.is_empty() || h.iter().any(Zero::is_zero) {
        return Err(Error::Precondition("all eigenvalues must be nonzero".into()));
    }
    let n_dim = h.len();
    let h_inv: Vec<Rational> = h.iter().map(|x| Rational::one() / x).collect();
    let mut report = Report::new("four-ways");
    for r in 0..=max_l {
        let l: Vec<usize> = (1..=r).collect();
        let hl = h_diag(h, &l, &l)?;
        let mut tally = Tally::default();
        for lambda in Partition::all_of_size(r) {
            let a_op = Op::group_algebra_operator(&alpha_element(&lambda, &l)?, &l, n_dim)?;
            for k in small_subsets(&l, max_k) {
                let rest = minus(&l, &k);
                let h_rest = h_diag(h, &rest, &l)?;
                let hk_inv = h_diag(&h_inv, &k, &k)?;
                let one = a_op.scale_rows(&hl)?.partial_trace(&rest)?.scale_rows(&hk_inv)?;
                let two = a_op.scale_rows(&h_rest)?.partial_trace(&rest)?;
                let three = a_op.scale_cols(&h_rest)?.partial_trace(&rest)?;
                let four = a_op.scale_cols(&hl)?.partial_trace(&rest)?.scale_cols(&hk_inv)?;
                tally.record(one == two && two == three && three == four, || format!("λ={lambda} K={k:?}"));
            }
        }
        tally.into_report(&mut report, format!("N={n_dim} |L|={r}"));
    }
    Ok(report)
}
