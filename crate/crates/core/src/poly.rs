//! Dense univariate polynomials over a commutative ring.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{binomial_q, Rational, Ring};

/// `coeffs[i]` is the coefficient of `x^i`; trailing zeros are always stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    /// `x + a`
    pub fn linear(a: R) -> Self {
        Self::new(vec![a, R::one()])
    }

    pub fn monomial(c: R, degree: usize) -> Self {
        let mut coeffs = vec![R::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * ring_int::<R>(i)).collect();
        Self::new(coeffs)
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Product of `(x + a)` over the given shifts.
    pub fn from_shifts<'a>(shifts: impl IntoIterator<Item = &'a R>) -> Self
    where
        R: 'a,
    {
        shifts.into_iter().fold(Self::one(), |acc, a| acc * Self::linear(a.clone()))
    }

    /// `p(x + t)` by Horner's scheme.
    pub fn compose_shift(&self, t: &R) -> Self {
        let step = Self::linear(t.clone());
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc * step.clone() + Self::constant(c.clone()))
    }

    /// Division by a monic polynomial; returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by zero polynomial");
        assert!(divisor.leading().unwrap().is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![R::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quot[i - d] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i - d + j] = rem[i - d + j].clone() - c.clone() * dc.clone();
            }
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }
}

impl Poly<Rational> {
    /// `p(x + t)`.
    pub fn shift(&self, t: &Rational) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut tp = Rational::one();
            for k in (0..=i).rev() {
                out[k] += c * binomial_q(i, k) * &tp;
                tp *= t;
            }
        }
        Self::new(out)
    }

    /// Order of vanishing at `t` (`usize::MAX` for the zero polynomial).
    pub fn zero_order_at(&self, t: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.shift(t);
        shifted.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}

/// The integer `n` embedded in a ring by repeated addition of one.
pub(crate) fn ring_int<R: Ring>(n: usize) -> R {
    let mut acc = R::zero();
    let mut base = R::one();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        k >>= 1;
    }
    acc
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (mut long, short) =
            if self.coeffs.len() >= rhs.coeffs.len() { (self.coeffs, rhs.coeffs) } else { (rhs.coeffs, self.coeffs) };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Self::new(long)
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;

    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn arithmetic_and_trimming() {
        let a = p(&[1, 2, 0, 0]);
        assert_eq!(a.degree(), Some(1));
        assert_eq!(a.clone() * p(&[-1, 1]), p(&[-1, -1, 2]));
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn shift_and_zero_order() {
        // (u+2)^2 (u-1)
        let f = Poly::from_shifts(&[int(2), int(2), int(-1)]);
        assert_eq!(f.zero_order_at(&int(-2)), 2);
        assert_eq!(f.zero_order_at(&int(1)), 1);
        assert_eq!(f.zero_order_at(&int(0)), 0);
        let g = f.shift(&rat(1, 3));
        assert_eq!(g.eval(&int(5)), f.eval(&(int(5) + rat(1, 3))));
    }

    #[test]
    fn monic_division() {
        let d = Poly::from_shifts(&[int(1), int(2)]);
        let q = p(&[3, 0, 1]);
        let (quot, rem) = (q.clone() * d.clone() + p(&[4, 5])).div_rem_monic(&d);
        assert_eq!(quot, q);
        assert_eq!(rem, p(&[4, 5]));
    }

    #[test]
    fn ring_int_matches_integer() {
        assert_eq!(ring_int::<Rational>(13), int(13));
        assert_eq!(ring_int::<f64>(0), 0.0);
    }
}
