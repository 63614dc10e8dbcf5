use super::{QuasiExp, QuasiExpSpace};
use crate::error::{domain, Result};
use crate::linalg::nullspace;
use crate::poly::Poly;
use crate::scalar::{factorial_q, Rational};

/// Orthogonal complement of a polynomial space in `C[u]_{≤M−1}` under
/// `(Σ f_i u^i/i!, Σ g_j u^j/j!) = Σ_i (−1)^i f_i g_{M−1−i}`.
pub fn dual_space(v: &QuasiExpSpace, m: usize) -> Result<QuasiExpSpace> {
    let n = v.dim();
    if m <= n {
        return domain(format!("M = {m} must exceed N = {n}"));
    }
    let mut rows = Vec::with_capacity(n);
    for f in v.basis() {
        let Some(p) = f.as_rational_polynomial() else {
            return domain("dual space needs a polynomial basis with rational coefficients");
        };
        if p.degree().is_some_and(|d| d >= m) {
            return domain(format!("basis polynomial of degree above M − 1 = {}", m - 1));
        }
        let mut row = vec![Rational::from_integer(0.into()); m];
        for (i, a) in p.coeffs().iter().enumerate() {
            let fi = a * factorial_q(i);
            let sign = if i % 2 == 0 { fi } else { -fi };
            row[m - 1 - i] = sign;
        }
        rows.push(row);
    }
    let basis = nullspace(&rows, m)
        .into_iter()
        .map(|g| {
            let coeffs = g.iter().enumerate().map(|(j, x)| x / factorial_q(j)).collect();
            QuasiExp::polynomial(&Poly::new(coeffs))
        })
        .collect();
    QuasiExpSpace::new(basis)
}
