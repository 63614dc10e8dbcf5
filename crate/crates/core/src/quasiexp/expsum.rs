use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Exact finite sum `Σ c_a e^a` with rational `a` and `c`.
///
/// Values of quasi-exponentials at rational points live here. Distinct
/// rational exponentials are linearly independent over the rationals, so
/// equality of canonical forms is equality of real numbers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpSum {
    terms: BTreeMap<Rational, Rational>,
}

impl ExpSum {
    pub fn rational(c: Rational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// `c·e^a`
    pub fn monomial(c: Rational, a: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        ExpSum { terms }
    }

    /// `e^a`
    pub fn exp(a: Rational) -> Self {
        Self::monomial(Rational::one(), a)
    }

    /// Exponent → coefficient, zero coefficients omitted.
    pub fn terms(&self) -> &BTreeMap<Rational, Rational> {
        &self.terms
    }

    /// The value if no exponential factor remains.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Rational::zero()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExpSum { terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect() }
    }

    /// Exact quotient by a single term `c·e^a`; `None` for any other divisor.
    pub fn div_monomial(&self, divisor: &ExpSum) -> Option<ExpSum> {
        let (a, c) = match divisor.terms.iter().next() {
            Some(t) if divisor.terms.len() == 1 => t,
            _ => return None,
        };
        Some(ExpSum { terms: self.terms.iter().map(|(b, v)| (b - a, v / c)).collect() })
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(a, c)| c.to_f64() * a.to_f64().exp()).sum()
    }

    fn insert(&mut self, a: Rational, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl From<Rational> for ExpSum {
    fn from(c: Rational) -> Self {
        Self::rational(c)
    }
}

impl Zero for ExpSum {
    fn zero() -> Self {
        ExpSum::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ExpSum {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Add for ExpSum {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, c) in rhs.terms {
            self.insert(a, c);
        }
        self
    }
}

impl Sub for ExpSum {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ExpSum {
    type Output = Self;

    fn neg(self) -> Self {
        ExpSum { terms: self.terms.into_iter().map(|(a, c)| (a, -c)).collect() }
    }
}

impl Mul for ExpSum {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = ExpSum::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.insert(a + b, c * d);
            }
        }
        out
    }
}

/// `"3/2"`, `"2*exp(1/2)"`, joined by `" + "`.
impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                if a.is_zero() {
                    format_rational(c)
                } else {
                    format!("{}*exp({})", format_rational(c), format_rational(a))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for ExpSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = ExpSum::zero();
        for part in s.split(" + ") {
            let part = part.trim();
            match part.split_once("*exp(") {
                Some((c, rest)) => {
                    let a = rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("malformed term {part:?}")))?;
                    out.insert(parse_rational(a)?, parse_rational(c)?);
                }
                None => out.insert(Rational::zero(), parse_rational(part)?),
            }
        }
        Ok(out)
    }
}

impl Serialize for ExpSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExpSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            other => crate::scalar::value_to_rational(other).map(ExpSum::rational).map_err(serde::de::Error::custom),
        }
    }
}
