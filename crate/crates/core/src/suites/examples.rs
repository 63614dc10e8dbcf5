//! Hand-expanded closed forms of `T_λ(u)` and `β_λ(u)` for `|λ| ≤ 2`.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::combinatorics::{Partition, Permutation};
use crate::error::{domain, Result};
use crate::gaudin::{build_beta, build_t_definitional, GaudinInstance, OperatorPolynomial};
use crate::par::Execution;
use crate::report::Report;
use crate::scalar::{rat, Rational};
use crate::symfunc::power_sum;
use crate::tensor::TensorOperator;

type Op = TensorOperator<Rational>;

/// `T_λ(u) = Σ_{|K|≤2} Π_{l∉K}(u+z_l)·c_K` with
///
/// - `c_∅ = s_λ(h)`,
/// - `c_{k} = Tr(h) ± h^{(k)}` for `(2)`, `(1,1)`, `1` for `(1)`,
/// - `c_{k,l} = I ± σ_{k,l}` for `(2)`, `(1,1)`.
pub fn t_closed_form(lambda: &Partition, inst: &GaudinInstance) -> Result<OperatorPolynomial<Rational>> {
    let sign = match lambda.parts() {
        [] | [1] => Rational::zero(),
        [2] => Rational::one(),
        [1, 1] => -Rational::one(),
        _ => return domain(format!("no closed form for {lambda}")),
    };
    let labels = inst.labels();
    let n_dim = inst.n_dim;
    let tr = power_sum(1, &inst.h)?;
    let tr2 = power_sum(2, &inst.h)?;
    let id = Op::identity(&labels, n_dim)?;
    let mut out = OperatorPolynomial::zero(&labels, n_dim)?;
    let c_empty = match lambda.size() {
        0 => Rational::one(),
        1 => tr.clone(),
        _ => (&tr * &tr + &sign * &tr2) * rat(1, 2),
    };
    out.add_poly_times(&inst.site_polynomial(), &id.scale(&c_empty))?;
    if lambda.size() >= 1 {
        for k in &labels {
            let op = if lambda.size() == 1 {
                id.clone()
            } else {
                let hk = Op::diagonal_h_action(&inst.h, &[*k], &labels)?;
                id.scale(&tr).add(&hk.scale(&sign))?
            };
            out.add_poly_times(&inst.complement_polynomial(&[*k]), &op)?;
        }
    }
    if lambda.size() == 2 {
        for pair in labels.iter().copied().combinations(2) {
            let swap =
                Op::permutation_operator(&Permutation::transposition(&labels, pair[0], pair[1])?, &labels, n_dim)?;
            out.add_poly_times(&inst.complement_polynomial(&pair), &id.add(&swap.scale(&sign))?)?;
        }
    }
    Ok(out)
}

/// `β_∅ = z_{[n]}·1`, `β_(1) = Σ_k z_{[n]∖k}·1`,
/// `β_(2), β_(1,1) = Σ_{k<l} z_{[n]∖{k,l}}(1 ± σ_{k,l})`, with `z_k → z_k + u`.
pub fn beta_closed_form(lambda: &Partition, inst: &GaudinInstance) -> Result<OperatorPolynomial<Rational>> {
    // at h = 0 only the |K| = |λ| terms survive
    t_closed_form(lambda, &inst.with_zero_h())
}

/// Compares both closed forms with the definitional route and `build_beta`
/// for every `|λ| ≤ 2`.
pub fn verify_examples(inst: &GaudinInstance) -> Result<Report> {
    let mut report = Report::new("examples");
    let tag = format!("N={} n={}", inst.n_dim, inst.n);
    for lambda in Partition::up_to(2) {
        let t = build_t_definitional(&lambda, inst, Execution::Sequential)?;
        report.check(format!("T_{lambda} closed form, {tag}"), t == t_closed_form(&lambda, inst)?, "");
        let beta = build_beta(&lambda, inst)?;
        report.check(format!("β_{lambda} closed form, {tag}"), beta == beta_closed_form(&lambda, inst)?, "");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn examples_match_for_small_instances() {
        let inst = GaudinInstance::new(vec![rat(1, 2), int(-2), int(3)], vec![int(1), rat(-3, 2)]).unwrap();
        let r = verify_examples(&inst).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn beta_constant_terms() {
        let inst = GaudinInstance::new(vec![int(5), int(7)], vec![int(2), int(3)]).unwrap();
        let b = beta_closed_form(&Partition::empty(), &inst).unwrap();
        assert_eq!(b.coeff(0), Op::scalar(&[1, 2], 2, int(6)).unwrap());
        let b1 = beta_closed_form(&"1".parse().unwrap(), &inst).unwrap();
        assert_eq!(b1.coeff(0), Op::scalar(&[1, 2], 2, int(5)).unwrap());
        assert!(t_closed_form(&"3".parse().unwrap(), &inst).is_err());
    }
}
