use serde_json::{Map, Value};

use super::ExpSum;
use crate::combinatorics::Partition;
use num_traits::Zero;

/// Projective vector `(Δ_λ)_{|λ| ≤ B}` in graded-lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerVector<S> {
    pub n_dim: usize,
    pub bound: usize,
    entries: Vec<(Partition, S)>,
}

/// Rows `λ_N, λ_{N-1}+1, …, λ_1+N-1` of the Taylor matrix used by `Δ_λ`;
/// `None` if `ℓ(λ) > N`.
pub fn minor_rows(lambda: &Partition, n_dim: usize) -> Option<Vec<usize>> {
    if lambda.length() > n_dim {
        return None;
    }
    Some((1..=n_dim).map(|i| lambda.part(n_dim - i + 1) + i - 1).collect())
}

impl<S> PlueckerVector<S> {
    pub fn from_entries(n_dim: usize, bound: usize, entries: Vec<(Partition, S)>) -> Self {
        PlueckerVector { n_dim, bound, entries }
    }

    pub fn entries(&self) -> &[(Partition, S)] {
        &self.entries
    }

    pub fn get(&self, lambda: &Partition) -> Option<&S> {
        self.entries.iter().find(|(l, _)| l == lambda).map(|(_, v)| v)
    }

    pub fn values(&self) -> impl Iterator<Item = &S> {
        self.entries.iter().map(|(_, v)| v)
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> PlueckerVector<T> {
        PlueckerVector {
            n_dim: self.n_dim,
            bound: self.bound,
            entries: self.entries.iter().map(|(l, v)| (l.clone(), f(v))).collect(),
        }
    }

    /// `{"[2,1]": value, …}`.
    pub fn to_dump(&self, f: impl Fn(&S) -> Value) -> Value {
        let mut m = Map::new();
        for (l, v) in &self.entries {
            m.insert(format!("{:?}", l.parts()).replace(' ', ""), f(v));
        }
        Value::Object(m)
    }
}

impl PlueckerVector<ExpSum> {
    /// Equality up to one global nonzero scalar, by cross-multiplication
    /// against the first nonzero entry.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        if self.entries.len() != other.entries.len()
            || self.entries.iter().zip(&other.entries).any(|((a, _), (b, _))| a != b)
        {
            return false;
        }
        let Some(p) = self.entries.iter().position(|(_, v)| !v.is_zero()) else {
            return other.values().all(|v| v.is_zero());
        };
        let (sp, op) = (&self.entries[p].1, &other.entries[p].1);
        if op.is_zero() {
            return false;
        }
        self.entries.iter().zip(&other.entries).all(|((_, a), (_, b))| a.clone() * op.clone() == b.clone() * sp.clone())
    }

    pub fn to_f64(&self) -> PlueckerVector<f64> {
        self.map(ExpSum::to_f64)
    }
}

impl PlueckerVector<f64> {
    /// Divides by the first entry whose magnitude exceeds `1e-12` of the
    /// largest one.
    pub fn normalized(&self) -> Option<Vec<f64>> {
        let scale = self.values().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        let pivot = *self.values().find(|v| v.abs() > 1e-12 * scale)?;
        Some(self.values().map(|v| v / pivot).collect())
    }

    /// Max-norm distance of the normalized vectors relative to the max-norm of
    /// `reference`.
    pub fn relative_distance(&self, reference: &Self) -> f64 {
        match (self.normalized(), reference.normalized()) {
            (Some(a), Some(b)) if a.len() == b.len() => {
                let norm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                diff / norm.max(f64::MIN_POSITIVE)
            }
            _ => f64::INFINITY,
        }
    }

    /// Largest entry of the wrong sign after normalization, relative to the
    /// largest magnitude (`0` means one-signed).
    pub fn sign_defect(&self) -> f64 {
        match self.normalized() {
            Some(v) => {
                let norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let worst = v.iter().fold(0.0f64, |m, x| m.max(-x));
                worst / norm
            }
            None => f64::INFINITY,
        }
    }
}
