use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ExpSum;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{binomial_q, factorial_q, pow_q, Rational};

/// Quasi-exponential function `Σ_c e^{cu} p_c(u)` with distinct exponents `c`.
///
/// Polynomial coefficients are [`ExpSum`]s so that translation by a rational
/// amount stays exact.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QuasiExp {
    terms: BTreeMap<Rational, Poly<ExpSum>>,
}

/// One `{exponent, coeffs}` term of the space file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDump {
    #[serde(with = "crate::scalar::rational_string")]
    pub exponent: Rational,
    pub coeffs: Vec<ExpSum>,
}

impl QuasiExp {
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Poly<ExpSum>)>) -> Self {
        let mut out = QuasiExp::zero();
        for (c, p) in terms {
            out.insert(c, p);
        }
        out
    }

    /// `e^{cu} p(u)` with rational coefficients.
    pub fn exp_poly(c: Rational, p: &Poly<Rational>) -> Self {
        Self::from_terms([(c, p.map(|x| ExpSum::rational(x.clone())))])
    }

    pub fn polynomial(p: &Poly<Rational>) -> Self {
        Self::exp_poly(Rational::zero(), p)
    }

    /// `e^{cu}`
    pub fn exponential(c: Rational) -> Self {
        Self::exp_poly(c, &Poly::one())
    }

    pub fn terms(&self) -> &BTreeMap<Rational, Poly<ExpSum>> {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<Rational> {
        self.terms.keys().cloned().collect()
    }

    /// The polynomial part if the only exponent is `0`.
    pub fn as_polynomial(&self) -> Option<Poly<ExpSum>> {
        match self.terms.len() {
            0 => Some(Poly::zero()),
            1 => self.terms.get(&Rational::zero()).cloned(),
            _ => None,
        }
    }

    /// The polynomial part if it exists and has rational coefficients.
    pub fn as_rational_polynomial(&self) -> Option<Poly<Rational>> {
        let p = self.as_polynomial()?;
        let coeffs: Option<Vec<Rational>> = p.coeffs().iter().map(ExpSum::as_rational).collect();
        coeffs.map(Poly::new)
    }

    /// `(c, p)` if the function is a single term `e^{cu} p(u)`.
    pub fn single_term(&self) -> Option<(&Rational, &Poly<ExpSum>)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &ExpSum) -> Self {
        Self::from_terms(self.terms.iter().map(|(a, p)| (a.clone(), p.scale(c))))
    }

    /// `e^{cu}·f(u)`
    pub fn mul_exp(&self, c: &Rational) -> Self {
        QuasiExp { terms: self.terms.iter().map(|(a, p)| (a + c, p.clone())).collect() }
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, p)| {
            let cp = p.scale(&ExpSum::rational(c.clone()));
            (c.clone(), cp + p.derivative())
        }))
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn eval(&self, t: &Rational) -> ExpSum {
        let te = ExpSum::rational(t.clone());
        self.terms.iter().fold(ExpSum::zero(), |acc, (c, p)| acc + ExpSum::exp(c * t) * p.eval(&te))
    }

    /// `[f(t), f'(t), …, f^{(count-1)}(t)]`.
    pub fn derivatives_at(&self, t: &Rational, count: usize) -> Vec<ExpSum> {
        let te = ExpSum::rational(t.clone());
        let mut out = vec![ExpSum::zero(); count];
        for (c, p) in &self.terms {
            // p^{(k)}(t) for all k up to the degree
            let mut pk = Vec::new();
            if t.is_zero() {
                let top = p.coeffs().len().min(count);
                pk.extend(p.coeffs()[..top].iter().enumerate().map(|(k, a)| a.scale(&factorial_q(k))));
            } else {
                let mut q = p.clone();
                while !q.is_zero() && pk.len() < count {
                    pk.push(q.eval(&te));
                    q = q.derivative();
                }
            }
            let scale = ExpSum::exp(c * t);
            for (i, slot) in out.iter_mut().enumerate() {
                let mut s = ExpSum::zero();
                for (k, v) in pk.iter().enumerate().take(i + 1) {
                    let w = binomial_q(i, k) * pow_q(c, i - k);
                    s = s + v.scale(&w);
                }
                *slot = slot.clone() + scale.clone() * s;
            }
        }
        out
    }

    /// Taylor coefficients `f^{(i)}(t)/i!` for `i < count`.
    pub fn taylor_at(&self, t: &Rational, count: usize) -> Vec<ExpSum> {
        self.derivatives_at(t, count).into_iter().enumerate().map(|(i, v)| v.scale(&factorial_q(i).recip())).collect()
    }

    /// `f(u + t)`.
    pub fn translate(&self, t: &Rational) -> Self {
        let te = ExpSum::rational(t.clone());
        Self::from_terms(self.terms.iter().map(|(c, p)| (c.clone(), p.compose_shift(&te).scale(&ExpSum::exp(c * t)))))
    }

    /// Order of the zero at `t` (`None` for the zero function).
    pub fn zero_order_at(&self, t: &Rational) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        // an exponential polynomial with these degrees vanishes to order < Σ(deg+1)
        let cap: usize = self.terms.values().map(|p| p.degree().unwrap_or(0) + 1).sum();
        self.derivatives_at(t, cap).iter().position(|v| !v.is_zero())
    }

    pub fn to_dump(&self) -> Vec<TermDump> {
        self.terms.iter().map(|(c, p)| TermDump { exponent: c.clone(), coeffs: p.coeffs().to_vec() }).collect()
    }

    pub fn from_dump(terms: &[TermDump]) -> Self {
        Self::from_terms(terms.iter().map(|t| (t.exponent.clone(), Poly::new(t.coeffs.clone()))))
    }

    pub fn to_f64_eval(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|(c, p)| {
                let pv = p.coeffs().iter().rev().fold(0.0, |acc, x| acc * u + x.to_f64());
                (crate::scalar::Scalar::to_f64(c) * u).exp() * pv
            })
            .sum()
    }

    fn insert(&mut self, c: Rational, p: Poly<ExpSum>) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl Zero for QuasiExp {
    fn zero() -> Self {
        QuasiExp::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for QuasiExp {
    fn one() -> Self {
        Self::exponential(Rational::zero())
    }
}

impl Add for QuasiExp {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (c, p) in rhs.terms {
            self.insert(c, p);
        }
        self
    }
}

impl Sub for QuasiExp {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuasiExp {
    type Output = Self;

    fn neg(self) -> Self {
        QuasiExp { terms: self.terms.into_iter().map(|(c, p)| (c, -p)).collect() }
    }
}

impl Mul for QuasiExp {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = QuasiExp::zero();
        for (a, p) in &self.terms {
            for (b, q) in &rhs.terms {
                out.insert(a + b, p.clone() * q.clone());
            }
        }
        out
    }
}

impl fmt::Debug for QuasiExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, p)| format!("e^({c}u)·{:?}", p.coeffs())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses the structured term list of one basis function.
pub fn parse_function(v: &serde_json::Value) -> Result<QuasiExp> {
    let terms: Vec<TermDump> =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("basis function: {e}")))?;
    Ok(QuasiExp::from_dump(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn q(c: i64, p: &[i64]) -> QuasiExp {
        QuasiExp::exp_poly(int(c), &Poly::new(p.iter().map(|&x| int(x)).collect()))
    }

    #[test]
    fn derivative_of_exp_poly() {
        // (e^{2u}(1+u))' = e^{2u}(3 + 2u)
        assert_eq!(q(2, &[1, 1]).derivative(), q(2, &[3, 2]));
    }

    #[test]
    fn derivatives_at_match_symbolic() {
        let f = q(2, &[1, 1]) + q(-1, &[0, 0, 3]);
        let t = rat(1, 3);
        let fast = f.derivatives_at(&t, 6);
        for (k, v) in fast.iter().enumerate() {
            assert_eq!(*v, f.nth_derivative(k).eval(&t), "order {k}");
        }
    }

    #[test]
    fn translation_is_exact() {
        let f = q(1, &[0, 1]);
        let t = int(2);
        let g = f.translate(&t);
        for u in [int(0), rat(1, 2), int(-3)] {
            assert_eq!(g.eval(&u), f.eval(&(&u + &t)));
        }
        assert_eq!(f.translate(&int(0)), f);
    }

    #[test]
    fn products_merge_exponents() {
        let f = q(1, &[1]) * q(-1, &[1]);
        assert_eq!(f, QuasiExp::one());
        assert_eq!((q(1, &[1]) - q(1, &[1])), QuasiExp::zero());
    }

    #[test]
    fn zero_orders() {
        let f = q(0, &[0, 0, 1]); // u²
        assert_eq!(f.zero_order_at(&int(0)), Some(2));
        assert_eq!(f.zero_order_at(&int(1)), Some(0));
        // e^u - 1 - u vanishes to order 2 at 0
        let g = q(1, &[1]) - q(0, &[1, 1]);
        assert_eq!(g.zero_order_at(&int(0)), Some(2));
        assert_eq!(QuasiExp::zero().zero_order_at(&int(0)), None);
    }

    #[test]
    fn dump_round_trip() {
        let f = q(1, &[0, 1]).translate(&rat(1, 2));
        let v = serde_json::to_value(f.to_dump()).unwrap();
        assert_eq!(parse_function(&v).unwrap(), f);
    }
}
