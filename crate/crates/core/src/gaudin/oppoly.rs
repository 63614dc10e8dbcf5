use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};
use crate::tensor::TensorOperator;

/// `Σ_i c_i u^i` with operator coefficients on a common factor set.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPolynomial<S> {
    factors: Vec<usize>,
    n_dim: usize,
    coeffs: Vec<TensorOperator<S>>,
}

impl<S: Scalar> OperatorPolynomial<S> {
    pub fn zero(factors: &[usize], n_dim: usize) -> Result<Self> {
        TensorOperator::<S>::zero(factors, n_dim)?;
        Ok(OperatorPolynomial { factors: factors.to_vec(), n_dim, coeffs: Vec::new() })
    }

    pub fn from_coeffs(factors: &[usize], n_dim: usize, coeffs: Vec<TensorOperator<S>>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.factors() != factors || c.n_dim() != n_dim) {
            return Err(Error::Incompatible(format!(
                "coefficient on {:?} in a polynomial on {factors:?}",
                bad.factors()
            )));
        }
        let mut p = Self::zero(factors, n_dim)?;
        p.coeffs = coeffs;
        p.trim();
        Ok(p)
    }

    /// `p(u) · I`.
    pub fn scalar(p: &Poly<Rational>, factors: &[usize], n_dim: usize) -> Result<Self> {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| TensorOperator::scalar(factors, n_dim, S::from_rational(c)))
            .collect::<Result<_>>()?;
        Self::from_coeffs(factors, n_dim, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(TensorOperator::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn coeffs(&self) -> &[TensorOperator<S>] {
        &self.coeffs
    }

    /// Coefficient of `u^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> TensorOperator<S> {
        self.coeffs.get(i).cloned().unwrap_or_else(|| TensorOperator::zero(&self.factors, self.n_dim).unwrap())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &S) -> TensorOperator<S> {
        let mut acc = TensorOperator::zero(&self.factors, self.n_dim).unwrap();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(t).add(c).unwrap();
        }
        acc
    }

    /// `self += c · u^power · op`.
    pub fn add_term(&mut self, power: usize, op: &TensorOperator<S>, c: &S) -> Result<()> {
        while self.coeffs.len() <= power {
            self.coeffs.push(TensorOperator::zero(&self.factors, self.n_dim)?);
        }
        self.coeffs[power].add_scaled_assign(op, c)?;
        self.trim();
        Ok(())
    }

    /// `self += p(u) · op`.
    pub fn add_poly_times(&mut self, p: &Poly<Rational>, op: &TensorOperator<S>) -> Result<()> {
        for (i, c) in p.coeffs().iter().enumerate() {
            self.add_term(i, op, &S::from_rational(c))?;
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (i, c) in other.coeffs.iter().enumerate() {
            out.add_term(i, c, &S::one())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (i, c) in other.coeffs.iter().enumerate() {
            out.add_term(i, c, &(-S::one()))?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        out.trim();
        out
    }

    /// Product with a scalar polynomial.
    pub fn mul_scalar_poly(&self, p: &Poly<Rational>) -> Self {
        let mut out = Self::zero(&self.factors, self.n_dim).unwrap();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in p.coeffs().iter().enumerate() {
                out.add_term(i + j, a, &S::from_rational(b)).unwrap();
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&S::from_int(i as i64))).collect();
        Self::from_coeffs(&self.factors, self.n_dim, coeffs).unwrap()
    }

    /// Division by a monic scalar polynomial: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Poly<Rational>) -> (Self, Self) {
        let d = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let zero = TensorOperator::zero(&self.factors, self.n_dim).unwrap();
        if rem.len() <= d {
            return (Self::zero(&self.factors, self.n_dim).unwrap(), self.clone());
        }
        let mut quot = vec![zero; rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs().iter().enumerate() {
                rem[i - d + j].add_scaled_assign(&c, &-S::from_rational(dc)).unwrap();
            }
            quot[i - d] = c;
        }
        rem.truncate(d);
        (
            Self::from_coeffs(&self.factors, self.n_dim, quot).unwrap(),
            Self::from_coeffs(&self.factors, self.n_dim, rem).unwrap(),
        )
    }

    pub fn to_float(&self) -> OperatorPolynomial<f64> {
        OperatorPolynomial {
            factors: self.factors.clone(),
            n_dim: self.n_dim,
            coeffs: self.coeffs.iter().map(TensorOperator::to_float).collect(),
        }
    }

    /// Array of operator dumps indexed by the power of `u`.
    pub fn to_dump(&self) -> Value {
        Value::Array(self.coeffs.iter().map(TensorOperator::to_dump).collect())
    }

    pub fn from_dump(v: &Value, factors: &[usize], n_dim: usize) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("operator polynomial dump must be an array".into()))?;
        let coeffs = arr.iter().map(TensorOperator::from_dump).collect::<Result<_>>()?;
        Self::from_coeffs(factors, n_dim, coeffs)
    }
}
