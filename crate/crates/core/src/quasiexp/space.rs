use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::Value;

use super::plucker::minor_rows;
use super::{parse_function, ExpSum, PlueckerVector, QuasiExp};
use crate::combinatorics::Partition;
use crate::error::{domain, Error, Result};
use crate::linalg::det_ring;
use crate::poly::Poly;
use crate::scalar::Rational;

/// `N`-dimensional space spanned by quasi-exponentials.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiExpSpace {
    basis: Vec<QuasiExp>,
}

/// `Wr(V) = e^{cu} g(u)` when the Wronskian has a single exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct WronskianInfo {
    pub function: QuasiExp,
    pub exponent: Option<Rational>,
    pub g: Option<Poly<ExpSum>>,
}

impl WronskianInfo {
    pub fn degree(&self) -> Option<usize> {
        self.g.as_ref().and_then(Poly::degree)
    }

    /// Order of the zero of `g` at `t`.
    pub fn zero_order_at(&self, t: &Rational) -> Option<usize> {
        self.function.zero_order_at(t)
    }
}

impl QuasiExpSpace {
    /// Checks linear independence through the Wronskian.
    pub fn new(basis: Vec<QuasiExp>) -> Result<Self> {
        let space = Self::from_basis_unchecked(basis)?;
        if space.wronskian_function().is_zero() {
            return Err(Error::DependentBasis("Wronskian vanishes identically".into()));
        }
        Ok(space)
    }

    /// Skips the independence check; the caller vouches for it.
    pub fn from_basis_unchecked(basis: Vec<QuasiExp>) -> Result<Self> {
        if basis.is_empty() {
            return domain("a space needs at least one basis function");
        }
        Ok(QuasiExpSpace { basis })
    }

    /// `⟨e^{h_1 u}, …, e^{h_N u}⟩`.
    pub fn pure_exponentials(h: &[Rational]) -> Result<Self> {
        Self::new(h.iter().map(|c| QuasiExp::exponential(c.clone())).collect())
    }

    /// `⟨e^{h_i u} p_i(u)⟩`.
    pub fn from_exp_polys(terms: &[(Rational, Poly<Rational>)]) -> Result<Self> {
        Self::new(terms.iter().map(|(c, p)| QuasiExp::exp_poly(c.clone(), p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QuasiExp] {
        &self.basis
    }

    pub fn is_polynomial(&self) -> bool {
        self.basis.iter().all(|f| f.as_polynomial().is_some())
    }

    /// Exponent of each basis function, if each has a single one.
    pub fn exponents(&self) -> Option<Vec<Rational>> {
        self.basis.iter().map(|f| f.single_term().map(|(c, _)| c.clone())).collect()
    }

    fn derivative_matrix(&self) -> Vec<Vec<QuasiExp>> {
        let n = self.dim();
        let mut rows = vec![self.basis.clone()];
        for i in 1..n {
            let next = rows[i - 1].iter().map(QuasiExp::derivative).collect();
            rows.push(next);
        }
        rows
    }

    pub fn wronskian_function(&self) -> QuasiExp {
        det_ring(&self.derivative_matrix())
    }

    pub fn wronskian(&self) -> WronskianInfo {
        let function = self.wronskian_function();
        let (exponent, g) = match function.single_term() {
            Some((c, p)) => (Some(c.clone()), Some(p.clone())),
            None if function.is_zero() => (None, Some(Poly::zero())),
            None => (None, None),
        };
        WronskianInfo { function, exponent, g }
    }

    /// `Σ d_i − Σ_j C(m_j, 2)`, valid for a basis of single-term functions in
    /// which equal exponents carry distinct polynomial degrees.
    pub fn predicted_wronskian_degree(&self) -> Result<usize> {
        let mut groups: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for f in &self.basis {
            let (c, p) =
                f.single_term().ok_or_else(|| Error::Precondition("basis function with several exponents".into()))?;
            groups.entry(c.clone()).or_default().push(p.degree().unwrap_or(0));
        }
        let mut total: i64 = 0;
        for degrees in groups.values() {
            let mut sorted = degrees.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != degrees.len() {
                return Err(Error::Precondition("equal exponents with equal degrees".into()));
            }
            let m = degrees.len();
            total += degrees.iter().sum::<usize>() as i64 - (m * (m.saturating_sub(1)) / 2) as i64;
        }
        usize::try_from(total).map_err(|_| Error::Precondition("negative predicted degree".into()))
    }

    /// `Σ c_i + Σ_j C(m_j, 2) − C(N, 2)` with `c_i` the zero orders of the
    /// basis functions at `t` and `m_j` the multiplicities among them.
    pub fn wronskian_zero_order_bound(&self, t: &Rational) -> Result<i64> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut sum = 0i64;
        for f in &self.basis {
            let c = f.zero_order_at(t).ok_or_else(|| Error::DependentBasis("zero basis function".into()))?;
            sum += c as i64;
            *counts.entry(c).or_default() += 1;
        }
        let pairs: i64 = counts.values().map(|&m| (m * (m - 1) / 2) as i64).sum();
        let n = self.dim() as i64;
        Ok(sum + pairs - n * (n - 1) / 2)
    }

    /// Entry `(i, j)` is `f_j^{(i)}(t)`.
    pub fn taylor_matrix(&self, t: &Rational, rows: usize) -> Result<Vec<Vec<ExpSum>>> {
        if rows < self.dim() {
            return domain(format!("need at least N = {} rows, got {rows}", self.dim()));
        }
        let cols: Vec<Vec<ExpSum>> = self.basis.iter().map(|f| f.derivatives_at(t, rows)).collect();
        Ok((0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
    }

    /// `Δ_λ(V(t))` for every `|λ| ≤ bound`.
    pub fn plucker_vector(&self, t: &Rational, bound: usize) -> PlueckerVector<ExpSum> {
        let n = self.dim();
        let taylor = self.taylor_matrix(t, bound + n).expect("rows >= N");
        let entries = Partition::up_to(bound)
            .into_iter()
            .map(|l| {
                let v = match minor_rows(&l, n) {
                    Some(rows) => {
                        let m: Vec<Vec<ExpSum>> = rows.iter().map(|&r| taylor[r].clone()).collect();
                        det_ring(&m)
                    }
                    None => ExpSum::zero(),
                };
                (l, v)
            })
            .collect();
        PlueckerVector::from_entries(n, bound, entries)
    }

    /// `Δ_λ(V(u))` as a function of `u`.
    pub fn minor_function(&self, lambda: &Partition) -> QuasiExp {
        let Some(rows) = minor_rows(lambda, self.dim()) else {
            return QuasiExp::zero();
        };
        let m: Vec<Vec<QuasiExp>> =
            rows.iter().map(|&r| self.basis.iter().map(|f| f.nth_derivative(r)).collect()).collect();
        det_ring(&m)
    }

    /// `V(t) = {f(u + t)}`.
    pub fn translate(&self, t: &Rational) -> QuasiExpSpace {
        QuasiExpSpace { basis: self.basis.iter().map(|f| f.translate(t)).collect() }
    }

    /// `e^{cu}·V`.
    pub fn mul_exp(&self, c: &Rational) -> QuasiExpSpace {
        QuasiExpSpace { basis: self.basis.iter().map(|f| f.mul_exp(c)).collect() }
    }

    /// List of basis functions, each a list of `{exponent, coeffs}` terms.
    pub fn to_dump(&self) -> Value {
        serde_json::to_value(self.basis.iter().map(QuasiExp::to_dump).collect::<Vec<_>>()).expect("serializable")
    }

    pub fn from_dump(v: &Value) -> Result<Self> {
        let list = v
            .as_array()
            .or_else(|| v.get("basis").and_then(Value::as_array))
            .ok_or_else(|| Error::Parse("space file must be a list of basis functions".into()))?;
        let basis = list.iter().map(parse_function).collect::<Result<Vec<_>>>()?;
        Self::new(basis)
    }
}

/// Number of partitions contributing to a full polynomial translation
/// expansion: `Δ_λ(V) = 0` once `λ_1 + N − 1` exceeds the top degree.
pub(crate) fn polynomial_partition_bound(space: &QuasiExpSpace) -> Option<usize> {
    let n = space.dim();
    let top = space
        .basis()
        .iter()
        .map(|f| f.as_polynomial().map(|p| p.degree().unwrap_or(0)))
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .max()?;
    Some(n * (top + 1).saturating_sub(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::symfunc::schur_eval;

    fn poly(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn wronskian_of_monomials_is_two() {
        let v =
            QuasiExpSpace::from_exp_polys(&[(int(0), poly(&[1])), (int(0), poly(&[0, 1])), (int(0), poly(&[0, 0, 1]))])
                .unwrap();
        assert_eq!(v.wronskian_function(), QuasiExp::polynomial(&poly(&[2])));
    }

    #[test]
    fn singleton_wronskian_is_function() {
        let f = QuasiExp::exp_poly(int(3), &poly(&[1, 2]));
        let v = QuasiExpSpace::new(vec![f.clone()]).unwrap();
        assert_eq!(v.wronskian_function(), f);
    }

    #[test]
    fn pure_exponential_wronskian_is_vandermonde() {
        let h = [int(1), int(2), rat(-1, 2)];
        let v = QuasiExpSpace::pure_exponentials(&h).unwrap();
        let w = v.wronskian();
        assert_eq!(w.exponent, Some(rat(5, 2)));
        let vandermonde = (&h[1] - &h[0]) * (&h[2] - &h[0]) * (&h[2] - &h[1]);
        assert_eq!(w.g.unwrap(), Poly::constant(ExpSum::rational(vandermonde)));
    }

    #[test]
    fn dependent_basis_rejected() {
        let f = QuasiExp::exp_poly(int(1), &poly(&[1, 1]));
        let err = QuasiExpSpace::new(vec![f.clone(), f.scale(&ExpSum::rational(int(2)))]).unwrap_err();
        assert!(matches!(err, Error::DependentBasis(_)));
    }

    #[test]
    fn taylor_matrix_of_monomials() {
        let v =
            QuasiExpSpace::from_exp_polys(&[(int(0), poly(&[1])), (int(0), poly(&[0, 1])), (int(0), poly(&[0, 0, 1]))])
                .unwrap();
        let m = v.taylor_matrix(&int(0), 4).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j { [1, 1, 2][j] } else { 0 };
                assert_eq!(*x, ExpSum::rational(int(expected)), "({i},{j})");
            }
        }
        assert!(v.taylor_matrix(&int(0), 2).is_err());
    }

    #[test]
    fn pure_exponential_coordinates_are_schur_values() {
        let h = [int(1), int(3)];
        let v = QuasiExpSpace::pure_exponentials(&h).unwrap();
        let t = rat(1, 2);
        let pv = v.plucker_vector(&t, 4);
        let schur = PlueckerVector::from_entries(
            2,
            4,
            pv.entries().iter().map(|(l, _)| (l.clone(), ExpSum::rational(schur_eval(l, &h)))).collect(),
        );
        assert!(pv.projectively_equal(&schur));
        assert_eq!(*pv.get(&Partition::empty()).unwrap(), v.wronskian_function().eval(&t));
    }

    #[test]
    fn translated_coordinates_match() {
        let v = QuasiExpSpace::from_exp_polys(&[(int(1), poly(&[1, 1])), (int(0), poly(&[0, 0, 1]))]).unwrap();
        let t = rat(2, 3);
        assert!(v.translate(&t).plucker_vector(&int(0), 5).projectively_equal(&v.plucker_vector(&t, 5)));
    }

    #[test]
    fn degree_and_zero_order_lemmas() {
        // equal exponents with degrees 0 and 2, plus a distinct exponent
        let v =
            QuasiExpSpace::from_exp_polys(&[(int(1), poly(&[1])), (int(1), poly(&[1, 0, 1])), (int(2), poly(&[0, 1]))])
                .unwrap();
        let w = v.wronskian();
        assert_eq!(w.degree(), Some(v.predicted_wronskian_degree().unwrap()));
        let t = int(0);
        let bound = v.wronskian_zero_order_bound(&t).unwrap();
        assert!(w.zero_order_at(&t).unwrap() as i64 >= bound);
    }

    #[test]
    fn space_dump_round_trip() {
        let v = QuasiExpSpace::from_exp_polys(&[(rat(1, 2), poly(&[1, 1])), (int(0), poly(&[0, 3]))]).unwrap();
        assert_eq!(QuasiExpSpace::from_dump(&v.to_dump()).unwrap(), v);
    }
}
