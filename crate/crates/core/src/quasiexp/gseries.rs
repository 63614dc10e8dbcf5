use num_traits::{One, Zero};

use super::{ExpSum, QuasiExp, QuasiExpSpace};
use crate::combinatorics::Partition;
use crate::error::{domain, Error, Result};
use crate::linalg::{det_ring, rank_domain};
use crate::report::Report;
use crate::scalar::{binomial_q, factorial_q, Rational};

/// Coefficients of `g_V(t,u) = Σ_{i≤D} Δ_{(i)}(V(t))/(N+i−1)!·(u−t)^{N+i−1}` in
/// powers of `w = u − t`, for `w^0 … w^{N+D−1}`.
pub fn g_series(v: &QuasiExpSpace, t: &Rational, truncation: usize) -> Vec<ExpSum> {
    let n = v.dim();
    let pv = v.plucker_vector(t, truncation);
    let mut out = vec![ExpSum::zero(); n + truncation];
    for i in 0..=truncation {
        let e = n + i - 1;
        out[e] = pv.get(&Partition::row(i)).expect("within bound").scale(&factorial_q(e).recip());
    }
    out
}

/// The same series from the bordered determinant with rows
/// `f(t), …, f^{(N−2)}(t), f(u)`, expanding `f(u)` about `u = t`.
pub fn g_series_bordered(v: &QuasiExpSpace, t: &Rational, truncation: usize) -> Vec<ExpSum> {
    let n = v.dim();
    let len = n + truncation;
    let taylor = v.taylor_matrix(t, len.max(n)).expect("rows >= N");
    (0..len)
        .map(|e| {
            let mut m: Vec<Vec<ExpSum>> = taylor[..n - 1].to_vec();
            m.push(taylor[e].clone());
            det_ring(&m).scale(&factorial_q(e).recip())
        })
        .collect()
}

/// `g, ∂_t g, …, ∂_t^{N−1} g` as truncated series in `w = u − t`.
#[derive(Clone, Debug, PartialEq)]
pub struct GBasis {
    /// `series[j][e]` is the coefficient of `w^e` in `∂_t^j g`.
    pub series: Vec<Vec<ExpSum>>,
    /// Coefficients up to and including this order are exact.
    pub valid_order: usize,
}

/// Builds the basis from single-row coordinates and certifies that it spans
/// the truncation of `V` at `t` by exact rank computations.
pub fn basis_from_g(v: &QuasiExpSpace, t: &Rational, truncation: usize) -> Result<GBasis> {
    let n = v.dim();
    if truncation + 1 < n {
        return domain(format!("truncation {truncation} too small for N = {n}"));
    }
    let singles: Vec<Vec<ExpSum>> =
        (0..=truncation).map(|i| v.minor_function(&Partition::row(i)).derivatives_at(t, n)).collect();
    let len = n + truncation;
    let mut series = vec![vec![ExpSum::zero(); len]; n];
    for (j, s) in series.iter_mut().enumerate() {
        for (i, derivs) in singles.iter().enumerate() {
            for k in 0..=j {
                let Some(e) = (n + i - 1).checked_sub(k) else {
                    continue;
                };
                let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                let coef = binomial_q(j, k) * sign / factorial_q(e);
                s[e] = s[e].clone() + derivs[j - k].scale(&coef);
            }
        }
    }
    let basis = GBasis { series, valid_order: truncation };
    let g_cols = basis.coefficient_matrix();
    let rank = rank_domain(&g_cols);
    if rank < n {
        return Err(Error::RankDeficient { rank, expected: n });
    }
    let v_cols: Vec<Vec<ExpSum>> = {
        let cols: Vec<Vec<ExpSum>> = v.basis().iter().map(|f| f.taylor_at(t, truncation + 1)).collect();
        (0..=truncation).map(|e| cols.iter().map(|c| c[e].clone()).collect()).collect()
    };
    let joint: Vec<Vec<ExpSum>> =
        v_cols.iter().zip(&g_cols).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
    let joint_rank = rank_domain(&joint);
    if joint_rank != n {
        return Err(Error::IdentityViolation(format!(
            "g-basis leaves the space: joint rank {joint_rank}, expected {n}"
        )));
    }
    Ok(basis)
}

impl GBasis {
    /// Rows `w^0 … w^{valid_order}`, one column per series.
    pub fn coefficient_matrix(&self) -> Vec<Vec<ExpSum>> {
        (0..=self.valid_order).map(|e| self.series.iter().map(|s| s[e].clone()).collect()).collect()
    }

    /// `∂_t^j g = (−1)^j Δ_∅(V(t))/(N−j−1)!·w^{N−j−1} + O(w^{N−j})`.
    pub fn leading_terms_match(&self, wronskian_at_t: &ExpSum) -> bool {
        let n = self.series.len();
        self.series.iter().enumerate().all(|(j, s)| {
            let e = n - j - 1;
            let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            let expected = wronskian_at_t.scale(&(sign / factorial_q(e)));
            s[..e].iter().all(Zero::is_zero) && s[e] == expected
        })
    }
}

/// Coefficients `c_i` of `D_V = Σ_i c_i ∂^{N−i}` at `u = t`, with
/// `c_i = (−1)^i Δ_{(1^i)}(V(t))/Δ_∅(V(t))`; `c_0 = 1`.
pub fn differential_operator(v: &QuasiExpSpace, t: &Rational) -> Result<Vec<ExpSum>> {
    let n = v.dim();
    let pv = v.plucker_vector(t, n);
    let wr = pv.get(&Partition::empty()).unwrap().clone();
    if wr.is_zero() {
        return Err(Error::Precondition(format!("t = {t} is a zero of the Wronskian")));
    }
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
            let num = pv.get(&Partition::column(i)).unwrap().scale(&sign);
            num.div_monomial(&wr)
                .ok_or_else(|| Error::Domain(format!("Wronskian value {wr} is not a single exponential term")))
        })
        .collect()
}

/// Checks `Σ_i (−1)^i Δ_{(1^i)}(V(u)) f^{(N−i)}(u) = 0` for every basis
/// function and `= Wr(V, probe)` for a probe function, as exact identities
/// of functions, and that the operator at `t` is monic.
pub fn verify_differential_operator(v: &QuasiExpSpace, t: &Rational, probe: &QuasiExp) -> Result<Report> {
    let n = v.dim();
    let coeffs = differential_operator(v, t)?;
    let mut report = Report::new("differential-operator");
    report.check("monic", coeffs[0] == ExpSum::one(), coeffs[0].to_string());
    let columns: Vec<QuasiExp> = (0..=n)
        .map(|i| {
            let f = v.minor_function(&Partition::column(i));
            if i % 2 == 0 {
                f
            } else {
                -f
            }
        })
        .collect();
    let apply = |f: &QuasiExp| {
        columns.iter().enumerate().fold(QuasiExp::zero(), |acc, (i, c)| acc + c.clone() * f.nth_derivative(n - i))
    };
    for (j, f) in v.basis().iter().enumerate() {
        report.check(format!("annihilates f_{}", j + 1), apply(f).is_zero(), "");
        let at_t: ExpSum = coeffs
            .iter()
            .zip(f.derivatives_at(t, n + 1).iter().rev())
            .fold(ExpSum::zero(), |acc, (c, d)| acc + c.clone() * d.clone());
        report.check(format!("annihilates f_{} at t", j + 1), at_t.is_zero(), at_t.to_string());
    }
    let mut extended = v.basis().to_vec();
    extended.push(probe.clone());
    let wr_ext = QuasiExpSpace::from_basis_unchecked(extended)?.wronskian_function();
    report.check("matches bordered Wronskian on probe", apply(probe) == wr_ext, "");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::scalar::{int, rat};
    use crate::symfunc::schur_eval;

    fn poly(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn series_matches_bordered_determinant() {
        let v = QuasiExpSpace::from_exp_polys(&[(int(0), poly(&[1, 2, 0, 1])), (int(1), poly(&[0, -1, 3]))]).unwrap();
        let t = rat(1, 2);
        assert_eq!(g_series(&v, &t, 6), g_series_bordered(&v, &t, 6));
    }

    #[test]
    fn pure_exponential_series() {
        let h = [int(1), int(2)];
        let v = QuasiExpSpace::pure_exponentials(&h).unwrap();
        let t = int(0);
        let g = g_series(&v, &t, 4);
        let wr = v.wronskian_function().eval(&t);
        for i in 0..=4usize {
            let e = 1 + i;
            let expected = wr.scale(&(schur_eval(&Partition::row(i), &h) / factorial_q(e)));
            assert_eq!(g[e], expected);
        }
        assert!(g[0].is_zero());
    }

    #[test]
    fn g_basis_spans_space() {
        let v = QuasiExpSpace::from_exp_polys(&[(int(0), poly(&[1, 1])), (int(0), poly(&[0, 0, 0, 1]))]).unwrap();
        let t = int(1);
        let b = basis_from_g(&v, &t, 6).unwrap();
        assert!(b.leading_terms_match(&v.wronskian_function().eval(&t)));
    }

    #[test]
    fn g_basis_for_single_function() {
        let f = QuasiExp::exp_poly(int(2), &poly(&[1, 1]));
        let v = QuasiExpSpace::new(vec![f.clone()]).unwrap();
        let b = basis_from_g(&v, &int(0), 5).unwrap();
        let taylor = f.taylor_at(&int(0), 6);
        assert_eq!(b.series[0], taylor);
    }

    #[test]
    fn g_basis_degenerates_at_wronskian_zero() {
        // Wr(1, u^2) = 2u
        let v = QuasiExpSpace::from_exp_polys(&[(int(0), poly(&[1])), (int(0), poly(&[0, 0, 1]))]).unwrap();
        let err = basis_from_g(&v, &int(0), 6).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { .. }));
    }

    #[test]
    fn operator_examples() {
        let one_u = QuasiExpSpace::from_exp_polys(&[(int(0), poly(&[1])), (int(0), poly(&[0, 1]))]).unwrap();
        let c = differential_operator(&one_u, &rat(1, 2)).unwrap();
        assert_eq!(c, vec![ExpSum::one(), ExpSum::zero(), ExpSum::zero()]);
        let exp = QuasiExpSpace::pure_exponentials(&[int(3)]).unwrap();
        let c = differential_operator(&exp, &int(1)).unwrap();
        assert_eq!(c, vec![ExpSum::one(), ExpSum::rational(int(-3))]);
    }

    #[test]
    fn operator_annihilates_space() {
        let v =
            QuasiExpSpace::from_exp_polys(&[(int(1), poly(&[1, 1])), (rat(1, 2), poly(&[2])), (int(0), poly(&[0, 1]))])
                .unwrap();
        let probe = QuasiExp::exp_poly(rat(1, 3), &poly(&[0, 0, 1]));
        let r = verify_differential_operator(&v, &rat(1, 4), &probe).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }
}
