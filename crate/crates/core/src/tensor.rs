//! Dense operators on `(C^N)^{⊗L}` for an ordered set of factor labels `L`.
//!
//! Basis vectors are multi-indices `(i_l)_{l∈L}` with `0 ≤ i_l < N`, flattened
//! in mixed radix with the first label most significant. Matrices are stored
//! row-major.

use serde_json::{json, Value};

use crate::combinatorics::{GroupAlgebraElement, Permutation};
use crate::error::{domain, Error, Result};
use crate::par::{self, Execution};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator<S> {
    factors: Vec<usize>,
    n_dim: usize,
    entries: Vec<S>,
}

/// Sorted union of two label lists.
pub fn union_labels(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_distinct(labels: &[usize]) -> Result<()> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return domain(format!("repeated factor labels {labels:?}"));
    }
    Ok(())
}

fn total_dim(n_dim: usize, factors: usize) -> usize {
    n_dim.pow(factors as u32)
}

/// Mixed-radix digits of `index`, first factor most significant.
pub fn unflatten(index: usize, n_dim: usize, factors: usize) -> Vec<usize> {
    let mut digits = vec![0; factors];
    let mut rest = index;
    for d in digits.iter_mut().rev() {
        *d = rest % n_dim;
        rest /= n_dim;
    }
    digits
}

pub fn flatten(digits: &[usize], n_dim: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * n_dim + d)
}

impl<S: Scalar> TensorOperator<S> {
    pub fn zero(factors: &[usize], n_dim: usize) -> Result<Self> {
        check_distinct(factors)?;
        if n_dim == 0 {
            return domain("factor dimension must be at least 1");
        }
        let d = total_dim(n_dim, factors.len());
        Ok(TensorOperator { factors: factors.to_vec(), n_dim, entries: vec![S::zero(); d * d] })
    }

    pub fn identity(factors: &[usize], n_dim: usize) -> Result<Self> {
        Self::scalar(factors, n_dim, S::one())
    }

    /// `c · I`.
    pub fn scalar(factors: &[usize], n_dim: usize, c: S) -> Result<Self> {
        let mut op = Self::zero(factors, n_dim)?;
        let d = op.dim();
        for i in 0..d {
            op.entries[i * d + i] = c.clone();
        }
        Ok(op)
    }

    /// Builds from row-major entries; the length must be `(N^|L|)^2`.
    pub fn from_entries(factors: &[usize], n_dim: usize, entries: Vec<S>) -> Result<Self> {
        let op = Self::zero(factors, n_dim)?;
        if entries.len() != op.entries.len() {
            return Err(Error::Incompatible(format!(
                "{} entries for an operator of dimension {}",
                entries.len(),
                op.dim()
            )));
        }
        Ok(TensorOperator { entries, ..op })
    }

    /// `E_{i,j}^{(k)}` with 1-based `i, j`, identity on the other factors.
    pub fn elementary_unit(i: usize, j: usize, k: usize, factors: &[usize], n_dim: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n_dim || j > n_dim {
            return domain(format!("basis index ({i},{j}) outside 1..={n_dim}"));
        }
        let Some(pos) = factors.iter().position(|&l| l == k) else {
            return domain(format!("label {k} not among factors {factors:?}"));
        };
        let mut op = Self::zero(factors, n_dim)?;
        let d = op.dim();
        for col in 0..d {
            let mut digits = unflatten(col, n_dim, factors.len());
            if digits[pos] != j - 1 {
                continue;
            }
            digits[pos] = i - 1;
            let row = flatten(&digits, n_dim);
            op.entries[row * d + col] = S::one();
        }
        Ok(op)
    }

    /// `h^{(K)}`: multiplies by `h_{i_k}` for every factor `k ∈ K`.
    pub fn diagonal_h_action(h: &[S], subset: &[usize], factors: &[usize]) -> Result<Self> {
        let n_dim = h.len();
        let positions = positions_of(subset, factors)?;
        let mut op = Self::zero(factors, n_dim)?;
        let d = op.dim();
        for idx in 0..d {
            let digits = unflatten(idx, n_dim, factors.len());
            op.entries[idx * d + idx] = positions.iter().fold(S::one(), |acc, &p| acc * h[digits[p]].clone());
        }
        Ok(op)
    }

    /// Factor-permuting action `σ(⊗ v_k) = ⊗ v_{σ^{-1}(k)}`.
    pub fn permutation_operator(sigma: &Permutation, factors: &[usize], n_dim: usize) -> Result<Self> {
        let mut op = Self::zero(factors, n_dim)?;
        op.add_permutation(sigma, &S::one())?;
        Ok(op)
    }

    /// Linear extension of the factor-permuting action to the group algebra.
    pub fn group_algebra_operator(elem: &GroupAlgebraElement, factors: &[usize], n_dim: usize) -> Result<Self> {
        let mut op = Self::zero(factors, n_dim)?;
        for (sigma, c) in elem.terms() {
            op.add_permutation(sigma, &S::from_rational(c))?;
        }
        if elem.terms().is_empty() {
            positions_of(elem.domain(), factors)?;
        }
        Ok(op)
    }

    fn add_permutation(&mut self, sigma: &Permutation, c: &S) -> Result<()> {
        let positions = positions_of(sigma.domain(), &self.factors)?;
        // target position of the component sitting at each domain slot
        let targets: Vec<usize> =
            sigma.images().iter().map(|img| self.factors.iter().position(|l| l == img).unwrap()).collect();
        let d = self.dim();
        for col in 0..d {
            let src = unflatten(col, self.n_dim, self.factors.len());
            let mut dst = src.clone();
            for (slot, &p) in positions.iter().enumerate() {
                dst[targets[slot]] = src[p];
            }
            let row = flatten(&dst, self.n_dim);
            let e = &mut self.entries[row * d + col];
            *e = e.clone() + c.clone();
        }
        Ok(())
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    /// Matrix dimension `N^|L|`.
    pub fn dim(&self) -> usize {
        total_dim(self.n_dim, self.factors.len())
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.dim() + col]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.dim().max(1)).map(<[S]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn trace(&self) -> S {
        let d = self.dim();
        (0..d).fold(S::zero(), |acc, i| acc + self.entries[i * d + i].clone())
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim();
        let mut entries = self.entries.clone();
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].clone();
            }
        }
        TensorOperator { entries, ..self.clone() }
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|r| (r + 1..d).all(|c| self.entries[r * d + c] == self.entries[c * d + r]))
    }

    pub fn scale(&self, c: &S) -> Self {
        TensorOperator { entries: self.entries.iter().map(|e| e.clone() * c.clone()).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-S::one()))
    }

    /// Identity extension onto `target`, which must contain every factor.
    pub fn embed(&self, target: &[usize]) -> Result<Self> {
        if target == self.factors.as_slice() {
            return Ok(self.clone());
        }
        let positions = positions_of(&self.factors, target)?;
        let mut op = Self::zero(target, self.n_dim)?;
        let d = op.dim();
        let small = self.dim();
        let others: Vec<usize> = (0..target.len()).filter(|p| !positions.contains(p)).collect();
        let rest = total_dim(self.n_dim, others.len());
        // offsets of the small operator's factors and of the spectator factors
        let small_off: Vec<usize> = (0..small)
            .map(|i| offset(&unflatten(i, self.n_dim, positions.len()), &positions, self.n_dim, target.len()))
            .collect();
        let rest_off: Vec<usize> = (0..rest)
            .map(|i| offset(&unflatten(i, self.n_dim, others.len()), &others, self.n_dim, target.len()))
            .collect();
        for (r, &ro) in small_off.iter().enumerate() {
            for (c, &co) in small_off.iter().enumerate() {
                let v = &self.entries[r * small + c];
                if v.is_zero() {
                    continue;
                }
                for &s in &rest_off {
                    op.entries[(ro + s) * d + co + s] = v.clone();
                }
            }
        }
        Ok(op)
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.n_dim != other.n_dim {
            return Err(Error::Incompatible(format!("factor dimensions {} and {}", self.n_dim, other.n_dim)));
        }
        if self.factors == other.factors {
            return Ok((self.clone(), other.clone()));
        }
        let target = union_labels(&self.factors, &other.factors);
        Ok((self.embed(&target)?, other.embed(&target)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let entries = a.entries.into_iter().zip(b.entries).map(|(x, y)| x + y).collect();
        Ok(TensorOperator { entries, ..b })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `self += c · other` for operators on the same factors.
    pub fn add_scaled_assign(&mut self, other: &Self, c: &S) -> Result<()> {
        if self.factors != other.factors || self.n_dim != other.n_dim {
            return Err(Error::Incompatible("operators on different factor sets".into()));
        }
        for (x, y) in self.entries.iter_mut().zip(&other.entries) {
            if !y.is_zero() {
                *x = x.clone() + y.clone() * c.clone();
            }
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.matmul_with(other, Execution::default())
    }

    /// Product `self · other`, rows distributed over threads in parallel mode.
    pub fn matmul_with(&self, other: &Self, exec: Execution) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let d = a.dim();
        let rows = par::map_range(exec, d, |r| {
            let mut row = vec![S::zero(); d];
            for k in 0..d {
                let x = &a.entries[r * d + k];
                if x.is_zero() {
                    continue;
                }
                for (c, out) in row.iter_mut().enumerate() {
                    let y = &b.entries[k * d + c];
                    if !y.is_zero() {
                        *out = out.clone() + x.clone() * y.clone();
                    }
                }
            }
            row
        });
        Ok(TensorOperator { entries: rows.into_iter().flatten().collect(), ..b })
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<S> {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i].clone()).collect()
    }

    /// `Diag(d) · A`.
    pub fn scale_rows(&self, diag: &[S]) -> Result<Self> {
        let d = self.dim();
        if diag.len() != d {
            return Err(Error::Incompatible(format!("diagonal of length {} for dimension {d}", diag.len())));
        }
        let entries = self.entries.iter().enumerate().map(|(i, v)| v.clone() * diag[i / d].clone()).collect();
        Ok(TensorOperator { entries, ..self.clone() })
    }

    /// `A · Diag(d)`.
    pub fn scale_cols(&self, diag: &[S]) -> Result<Self> {
        let d = self.dim();
        if diag.len() != d {
            return Err(Error::Incompatible(format!("diagonal of length {} for dimension {d}", diag.len())));
        }
        let entries = self.entries.iter().enumerate().map(|(i, v)| v.clone() * diag[i % d].clone()).collect();
        Ok(TensorOperator { entries, ..self.clone() })
    }

    /// `Tr_K`: contracts the factors in `K`, leaving an operator on `L ∖ K`.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<Self> {
        let tpos = positions_of(traced, &self.factors)?;
        let kept: Vec<usize> = (0..self.factors.len()).filter(|p| !tpos.contains(p)).collect();
        let kept_labels: Vec<usize> = kept.iter().map(|&p| self.factors[p]).collect();
        let mut op = Self::zero(&kept_labels, self.n_dim)?;
        let nf = self.factors.len();
        let d = self.dim();
        let kd = op.dim();
        let kept_off: Vec<usize> =
            (0..kd).map(|i| offset(&unflatten(i, self.n_dim, kept.len()), &kept, self.n_dim, nf)).collect();
        let traced_off: Vec<usize> = (0..total_dim(self.n_dim, tpos.len()))
            .map(|i| offset(&unflatten(i, self.n_dim, tpos.len()), &tpos, self.n_dim, nf))
            .collect();
        for (r, &ro) in kept_off.iter().enumerate() {
            for (c, &co) in kept_off.iter().enumerate() {
                let mut acc = S::zero();
                for &t in &traced_off {
                    let v = &self.entries[(ro + t) * d + co + t];
                    if !v.is_zero() {
                        acc = acc + v.clone();
                    }
                }
                op.entries[r * kd + c] = acc;
            }
        }
        Ok(op)
    }

    /// Relabels the factors positionally; the entries are unchanged.
    pub fn relabel(&self, factors: &[usize]) -> Result<Self> {
        check_distinct(factors)?;
        if factors.len() != self.factors.len() {
            return Err(Error::Incompatible("relabelling changes the factor count".into()));
        }
        Ok(TensorOperator { factors: factors.to_vec(), ..self.clone() })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TensorOperator<T> {
        TensorOperator {
            factors: self.factors.clone(),
            n_dim: self.n_dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> TensorOperator<f64> {
        self.map(Scalar::to_f64)
    }

    /// `{factors, dim_per_factor, entries}` with row-major entries.
    pub fn to_dump(&self) -> Value {
        json!({
            "factors": self.factors,
            "dim_per_factor": self.n_dim,
            "entries": self.entries.iter().map(Scalar::to_dump_value).collect::<Vec<_>>(),
        })
    }

    pub fn from_dump(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("operator dump: {what}"));
        let factors: Vec<usize> =
            serde_json::from_value(v.get("factors").cloned().ok_or_else(|| bad("missing factors"))?)?;
        let n_dim =
            v.get("dim_per_factor").and_then(Value::as_u64).ok_or_else(|| bad("missing dim_per_factor"))? as usize;
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing entries"))?
            .iter()
            .map(S::from_dump_value)
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(&factors, n_dim, entries)
    }
}

impl TensorOperator<Rational> {
    /// Max-abs entry as a float, for residual reporting.
    pub fn max_abs_f64(&self) -> f64 {
        self.entries.iter().map(|e| Scalar::to_f64(e).abs()).fold(0.0, f64::max)
    }
}

fn positions_of(subset: &[usize], factors: &[usize]) -> Result<Vec<usize>> {
    check_distinct(subset)?;
    subset
        .iter()
        .map(|k| {
            factors
                .iter()
                .position(|l| l == k)
                .ok_or_else(|| Error::Domain(format!("label {k} not among factors {factors:?}")))
        })
        .collect()
}

fn offset(digits: &[usize], positions: &[usize], n_dim: usize, factors: usize) -> usize {
    digits.iter().zip(positions).map(|(&d, &p)| d * n_dim.pow((factors - 1 - p) as u32)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    type Op = TensorOperator<Rational>;

    #[test]
    fn units_and_resolution_of_identity() {
        let e = Op::elementary_unit(1, 2, 1, &[1], 2).unwrap();
        assert_eq!(e.entries(), &[int(0), int(1), int(0), int(0)]);
        let mut sum = Op::zero(&[1, 2], 3).unwrap();
        for i in 1..=3 {
            sum = sum.add(&Op::elementary_unit(i, i, 2, &[1, 2], 3).unwrap()).unwrap();
        }
        assert_eq!(sum, Op::identity(&[1, 2], 3).unwrap());
        assert!(Op::elementary_unit(0, 1, 1, &[1], 2).is_err());
        assert!(Op::elementary_unit(1, 1, 3, &[1], 2).is_err());
    }

    #[test]
    fn swap_from_units() {
        let f = [1, 2];
        let mut sum = Op::zero(&f, 2).unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                let a = Op::elementary_unit(j, i, 1, &f, 2).unwrap();
                let b = Op::elementary_unit(i, j, 2, &f, 2).unwrap();
                sum = sum.add(&a.matmul(&b).unwrap()).unwrap();
            }
        }
        let swap = Op::permutation_operator(&Permutation::transposition(&f, 1, 2).unwrap(), &f, 2).unwrap();
        assert_eq!(sum, swap);
        let tr = swap.partial_trace(&[2]).unwrap();
        assert_eq!(tr, Op::identity(&[1], 2).unwrap());
    }

    #[test]
    fn diagonal_actions() {
        let h = [int(1), int(2)];
        let d = Op::diagonal_h_action(&h, &[1, 2], &[1, 2]).unwrap();
        let diag: Vec<Rational> = (0..4).map(|i| d.get(i, i).clone()).collect();
        assert_eq!(diag, vec![int(1), int(2), int(2), int(4)]);
        assert_eq!(Op::diagonal_h_action(&h, &[], &[1, 2]).unwrap(), Op::identity(&[1, 2], 2).unwrap());
        let a = Op::diagonal_h_action(&h, &[1], &[1, 2]).unwrap();
        let b = Op::diagonal_h_action(&h, &[2], &[1, 2]).unwrap();
        assert_eq!(a.matmul(&b).unwrap(), d);
        assert!(Op::diagonal_h_action(&h, &[3], &[1, 2]).is_err());
    }

    #[test]
    fn permutation_action_is_a_representation() {
        let f = [1, 2, 3];
        for s in Permutation::all(&f) {
            for t in Permutation::all(&f) {
                let ps = Op::permutation_operator(&s, &f, 2).unwrap();
                let pt = Op::permutation_operator(&t, &f, 2).unwrap();
                let pst = Op::permutation_operator(&s.compose(&t).unwrap(), &f, 2).unwrap();
                assert_eq!(ps.matmul(&pt).unwrap(), pst);
            }
        }
        // σ = (1→2→3→1) sends e_a⊗e_b⊗e_c to e_c⊗e_a⊗e_b
        let c = Permutation::from_cycles(&f, &[vec![1, 2, 3]]).unwrap();
        let p = Op::permutation_operator(&c, &f, 2).unwrap();
        let src = flatten(&[1, 0, 0], 2);
        let dst = flatten(&[0, 1, 0], 2);
        assert_eq!(p.get(dst, src), &int(1));
    }

    #[test]
    fn embedding_and_traces() {
        let e = Op::elementary_unit(1, 2, 5, &[5], 2).unwrap();
        let big = e.embed(&[2, 5]).unwrap();
        assert_eq!(big, Op::elementary_unit(1, 2, 5, &[2, 5], 2).unwrap());
        assert_eq!(Op::identity(&[1, 2, 3], 3).unwrap().trace(), int(27));
        let full = Op::identity(&[1, 2], 2).unwrap().partial_trace(&[1, 2]).unwrap();
        assert_eq!(full.factors(), &[] as &[usize]);
        assert_eq!(full.entries(), &[int(4)]);
    }

    #[test]
    fn layout_round_trip() {
        for n in 1..=3 {
            for l in 0..=4 {
                let d = total_dim(n, l);
                if d > 81 {
                    continue;
                }
                for i in 0..d {
                    assert_eq!(flatten(&unflatten(i, n, l), n), i);
                }
            }
        }
    }

    #[test]
    fn dump_round_trip() {
        let e = Op::elementary_unit(2, 1, 1, &[1, 2], 2).unwrap().scale(&crate::scalar::rat(3, 7));
        let back = Op::from_dump(&e.to_dump()).unwrap();
        assert_eq!(back, e);
        let f = e.to_float();
        assert_eq!(TensorOperator::<f64>::from_dump(&f.to_dump()).unwrap(), f);
    }
}
