use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::Rng;

use super::{QuasiExp, QuasiExpSpace};
use crate::error::{domain, Error, Result};
use crate::linalg::det_field;
use crate::poly::Poly;
use crate::report::Report;
use crate::scalar::{binomial_q, factorial_q, int, pow_q, Rational};

/// `(1 + u/k)^e` with exact coefficients.
fn binomial_power(k: usize, e: usize) -> Poly<Rational> {
    binomial_power_truncated(k, e, e + 1)
}

/// The first `terms` coefficients of `(1 + u/k)^e`.
fn binomial_power_truncated(k: usize, e: usize, terms: usize) -> Poly<Rational> {
    let mut c = Rational::one();
    let mut coeffs = Vec::with_capacity(terms.min(e + 1));
    for j in 0..terms.min(e + 1) {
        coeffs.push(c.clone());
        c = c * int((e - j) as i64) / int(((j + 1) * k) as i64);
    }
    Poly::new(coeffs)
}

fn integer_exponent(c: &Rational) -> Result<usize> {
    if !c.is_integer() || c.is_negative() {
        return domain(format!("exponent {c} is not a nonnegative integer"));
    }
    usize::try_from(c.to_integer()).map_err(|_| Error::Domain(format!("exponent {c} too large")))
}

fn single_terms(v: &QuasiExpSpace) -> Result<Vec<(usize, Poly<Rational>)>> {
    v.basis()
        .iter()
        .map(|f| {
            let (c, _) =
                f.single_term().ok_or_else(|| Error::Domain("basis function with several exponents".into()))?;
            let p = f
                .mul_exp(&-c.clone())
                .as_rational_polynomial()
                .ok_or_else(|| Error::Domain("non-rational polynomial part".into()))?;
            Ok((integer_exponent(c)?, p))
        })
        .collect()
}

/// `V_k = ⟨(1 + u/k)^{h_i k} p_i(u)⟩`, a polynomial space converging to `V`.
pub fn poly_limit_family(v: &QuasiExpSpace, k: usize) -> Result<QuasiExpSpace> {
    limit_family_with(v, k, binomial_power)
}

fn limit_family_with(
    v: &QuasiExpSpace,
    k: usize,
    power: impl Fn(usize, usize) -> Poly<Rational>,
) -> Result<QuasiExpSpace> {
    if k == 0 {
        return domain("k must be positive");
    }
    let basis = single_terms(v)?.into_iter().map(|(h, p)| QuasiExp::polynomial(&(power(k, h * k) * p))).collect();
    QuasiExpSpace::from_basis_unchecked(basis)
}

/// Degree and zero-order bookkeeping of `Wr(V_k)`: the degree predicted from
/// the basis degrees, a zero at `u = −k` of at least the predicted order,
/// and a cofactor of the same degree as the polynomial part of `Wr(V)`.
pub fn limit_family_report(v: &QuasiExpSpace, k: usize) -> Result<Report> {
    let mut report = Report::new(format!("limit-family k={k}"));
    let vk = poly_limit_family(v, k)?;
    let wr = vk
        .wronskian()
        .g
        .and_then(|g| {
            let c: Option<Vec<Rational>> = g.coeffs().iter().map(|x| x.as_rational()).collect();
            c.map(Poly::new)
        })
        .ok_or_else(|| Error::IdentityViolation("Wronskian of a polynomial space is not polynomial".into()))?;
    if wr.is_zero() {
        return Err(Error::DependentBasis(format!("V_{k} is dependent")));
    }
    match vk.predicted_wronskian_degree() {
        Ok(d) => report.check("degree", wr.degree() == Some(d), format!("{:?} vs {d}", wr.degree())),
        Err(e) => report.warn(format!("degree lemma not applicable: {e}")),
    }
    let t = -int(k as i64);
    let bound = vk.wronskian_zero_order_bound(&t)?;
    let order = wr.zero_order_at(&t) as i64;
    report.check("zero order at -k", order >= bound, format!("{order} >= {bound}"));
    let target = v.wronskian().degree();
    if bound >= 0 {
        let factor = binomial_power(k, bound as usize);
        let monic = factor.scale(&pow_q(&int(k as i64), bound as usize));
        let (q, r) = wr.div_rem_monic(&monic);
        report.check("divisible", r.is_zero(), "");
        report.check("cofactor degree", q.degree() == target, format!("{:?} vs {:?}", q.degree(), target));
    }
    Ok(report)
}

/// Relative max-norm distance of normalized Plücker vectors of `V_k` and `V`
/// at `t`, one entry per `k`.
pub fn limit_errors(v: &QuasiExpSpace, ks: &[usize], t: &Rational, bound: usize) -> Result<Vec<f64>> {
    let exact = v.plucker_vector(t, bound).to_f64();
    // at u = 0 only the first bound + N Taylor coefficients enter
    let terms = bound + v.dim() + single_terms(v)?.iter().map(|(_, p)| p.degree().unwrap_or(0)).max().unwrap_or(0);
    ks.iter()
        .map(|&k| {
            let vk = if t.is_zero() {
                limit_family_with(v, k, |k, e| binomial_power_truncated(k, e, terms))?
            } else {
                poly_limit_family(v, k)?
            };
            Ok(vk.plucker_vector(t, bound).to_f64().relative_distance(&exact))
        })
        .collect()
}

/// Lower-triangular `B_{ik} = C(i,k) c^{i−k}`: multiplication by `e^{cu}` on
/// derivative vectors.
pub fn exp_shift_matrix(c: &Rational, size: usize) -> Result<Vec<Vec<Rational>>> {
    if !c.is_positive() {
        return domain(format!("shift c = {c} must be positive"));
    }
    Ok((0..size)
        .map(|i| {
            (0..size).map(|k| if k <= i { binomial_q(i, k) * pow_q(c, i - k) } else { Rational::zero() }).collect()
        })
        .collect())
}

/// `exp(G)` for the subdiagonal generator `G_{i+1,i} = (i+1)c`, summed
/// exactly (`G` is nilpotent).
pub fn exp_of_generator(c: &Rational, size: usize) -> Vec<Vec<Rational>> {
    let mut g = vec![vec![Rational::zero(); size]; size];
    for i in 1..size {
        g[i][i - 1] = int(i as i64) * c;
    }
    let mut out: Vec<Vec<Rational>> = (0..size)
        .map(|i| (0..size).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut power = out.clone();
    for m in 1..size.max(1) {
        power =
            (0..size).map(|i| (0..size).map(|j| (0..size).map(|l| &power[i][l] * &g[l][j]).sum()).collect()).collect();
        let inv = factorial_q(m).recip();
        for i in 0..size {
            for j in 0..size {
                out[i][j] += &power[i][j] * &inv;
            }
        }
    }
    out
}

/// Sorted row/column sets `I, J` of equal size with `i_k ≥ j_k`.
pub fn sample_nonvanishing_index_sets<R: Rng>(size: usize, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    loop {
        let m = rng.gen_range(1..=size);
        let mut rows = sample(rng, size, m).into_vec();
        let mut cols = sample(rng, size, m).into_vec();
        rows.sort_unstable();
        cols.sort_unstable();
        if rows.iter().zip(&cols).all(|(i, j)| i >= j) {
            return (rows, cols);
        }
    }
}

/// Samples minors of the shift matrix that do not vanish by triangularity and
/// checks each is strictly positive.
pub fn shift_minor_report<R: Rng>(c: &Rational, size: usize, samples: usize, rng: &mut R) -> Result<Report> {
    let b = exp_shift_matrix(c, size)?;
    let mut report = Report::new(format!("shift-minors c={c} size={size}"));
    let mut worst: Option<(Rational, Vec<usize>, Vec<usize>)> = None;
    for _ in 0..samples {
        let (rows, cols) = sample_nonvanishing_index_sets(size, rng);
        let minor: Vec<Vec<Rational>> = rows.iter().map(|&i| cols.iter().map(|&j| b[i][j].clone()).collect()).collect();
        let d = det_field(&minor);
        if worst.as_ref().is_none_or(|(w, _, _)| d < *w) {
            worst = Some((d, rows, cols));
        }
    }
    if let Some((d, rows, cols)) = worst {
        report.check(
            format!("{samples} minors positive"),
            d.is_positive(),
            format!("smallest {d} at rows {rows:?}, cols {cols:?}"),
        );
    }
    Ok(report)
}
