//! Joint eigenspaces of the commuting family `T_λ(t)` in the float backend.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Tolerances;
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::gaudin::{build_t_definitional, GaudinInstance, OperatorPolynomial};
use crate::par::{self, Execution};
use crate::poly::Poly;
use crate::scalar::{rat, Rational, Scalar};
use crate::tensor::TensorOperator;

const MAX_ATTEMPTS: usize = 3;

/// One joint eigenspace: an orthonormal basis and the eigenvalue of each
/// family member on it.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenspace {
    pub basis: Vec<Vec<f64>>,
    pub values: Vec<(Partition, f64)>,
}

impl Eigenspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenspaceDecomposition {
    pub spaces: Vec<Eigenspace>,
    /// Max of `‖A Q − λ Q‖ / ‖A‖` over family members and clusters.
    pub action_residual: f64,
    /// Max `|⟨v, w⟩|` across different clusters.
    pub orthogonality: f64,
    /// Max relative spread of per-vector Rayleigh quotients within a cluster.
    pub rayleigh_spread: f64,
    /// Coefficients of the random combination that was diagonalized.
    pub coefficients: Vec<f64>,
    pub attempts: usize,
}

impl EigenspaceDecomposition {
    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(Eigenspace::dim).sum()
    }
}

/// `T_λ(u)` for each listed partition, by the definitional route.
pub fn build_family(
    inst: &GaudinInstance,
    partitions: &[Partition],
    exec: Execution,
) -> Result<Vec<(Partition, OperatorPolynomial<Rational>)>> {
    par::map(exec, partitions, |lambda| {
        build_t_definitional(lambda, inst, Execution::Sequential).map(|op| (lambda.clone(), op))
    })
    .into_iter()
    .collect()
}

fn to_matrix(op: &TensorOperator<f64>) -> DMatrix<f64> {
    let d = op.dim();
    DMatrix::from_row_slice(d, d, op.entries())
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Mean Rayleigh quotient of `a` over the orthonormal columns of `q`, and the
/// relative action residual `‖a q − λ q‖_max / ‖a‖_max`.
fn cluster_value(a: &DMatrix<f64>, q: &DMatrix<f64>) -> (f64, f64, f64) {
    let aq = a * q;
    let k = q.ncols();
    let quotients: Vec<f64> = (0..k).map(|i| q.column(i).dot(&aq.column(i))).collect();
    let value = quotients.iter().sum::<f64>() / k as f64;
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let residual = max_abs(&(aq - q * value)) / scale;
    let spread = quotients.iter().fold(0.0f64, |m, r| m.max((r - value).abs())) / scale;
    (value, residual, spread)
}

/// Diagonalizes a random combination `Σ c_λ T_λ / ‖T_λ‖` with
/// `c_λ ∈ [1/2, 3/2]`, clusters eigenvalues at relative gap `tol.cluster`,
/// and checks every family member acts as a scalar on every cluster.
/// Re-randomizes up to three times before reporting a genericity failure.
pub fn simultaneous_eigenspaces(
    family: &[(Partition, TensorOperator<f64>)],
    tol: &Tolerances,
    rng: &mut ChaCha8Rng,
) -> Result<EigenspaceDecomposition> {
    let Some((_, first)) = family.first() else {
        return Err(Error::Domain("empty operator family".into()));
    };
    let d = first.dim();
    let mats: Vec<DMatrix<f64>> = family.iter().map(|(_, op)| to_matrix(op)).collect();
    let mut last_failure = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        let coefficients: Vec<f64> = (0..mats.len()).map(|_| rng.gen_range(32..=96) as f64 / 64.0).collect();
        let mut combo = DMatrix::<f64>::zeros(d, d);
        for (m, c) in mats.iter().zip(&coefficients) {
            let norm = max_abs(m);
            if norm > 0.0 {
                combo += m * (c / norm);
            }
        }
        let eig = SymmetricEigen::new(combo);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let scale = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(c) if eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()] <= tol.cluster * scale => c.push(i),
                _ => clusters.push(vec![i]),
            }
        }
        let qs: Vec<DMatrix<f64>> = clusters
            .iter()
            .map(|c| {
                DMatrix::from_columns(
                    &c.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<DVector<f64>>>(),
                )
            })
            .collect();
        let mut action_residual = 0.0f64;
        let mut rayleigh_spread = 0.0f64;
        let mut spaces = Vec::with_capacity(qs.len());
        for q in &qs {
            let mut values = Vec::with_capacity(family.len());
            for ((lambda, _), m) in family.iter().zip(&mats) {
                let (value, residual, spread) = cluster_value(m, q);
                action_residual = action_residual.max(residual);
                rayleigh_spread = rayleigh_spread.max(spread);
                values.push((lambda.clone(), value));
            }
            let basis = (0..q.ncols()).map(|i| q.column(i).iter().copied().collect()).collect();
            spaces.push(Eigenspace { basis, values });
        }
        let mut orthogonality = 0.0f64;
        for (a, qa) in qs.iter().enumerate() {
            for qb in &qs[a + 1..] {
                orthogonality = orthogonality.max(max_abs(&(qa.transpose() * qb)));
            }
        }
        if action_residual <= tol.eigenvalue && rayleigh_spread <= tol.eigenvalue && orthogonality <= tol.cluster {
            return Ok(EigenspaceDecomposition {
                spaces,
                action_residual,
                orthogonality,
                rayleigh_spread,
                coefficients,
                attempts: attempt,
            });
        }
        last_failure = format!(
            "action residual {action_residual:.3e}, Rayleigh spread {rayleigh_spread:.3e}, orthogonality {orthogonality:.3e}"
        );
    }
    Err(Error::Genericity(format!(
        "no clean cluster split after {MAX_ATTEMPTS} random combinations ({last_failure}); re-randomize inputs"
    )))
}

/// Sample points `t + j/2`, `j = 0..=n`, and the held-out point `t + (2n+1)/4`.
fn sample_points(t: &Rational, degree: usize) -> (Vec<Rational>, Rational) {
    let samples = (0..=degree).map(|j| t + rat(j as i64, 2)).collect();
    let held_out = t + rat(2 * degree as i64 + 1, 4);
    (samples, held_out)
}

/// Monomial coefficients of the interpolant through `(x_i, y_i)`.
fn interpolate(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    let k = xs.len();
    let v = DMatrix::from_fn(k, k, |i, j| xs[i].powi(j as i32));
    let sol = v
        .lu()
        .solve(&DVector::from_column_slice(ys))
        .ok_or_else(|| Error::Instability("singular interpolation nodes".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Eigenvalue of `op(t)` on the space, as a polynomial of degree `≤ n`
/// interpolated from `n+1` samples, with the residual at a held-out point
/// relative to the operator's max-abs entry (which also includes the action
/// residual at every sample).
pub fn eigenvalue_polynomial(
    op: &OperatorPolynomial<Rational>,
    space: &Eigenspace,
    t: &Rational,
    degree: usize,
) -> Result<(Poly<f64>, f64)> {
    let q = DMatrix::from_columns(&space.basis.iter().map(|v| DVector::from_column_slice(v)).collect::<Vec<_>>());
    let (samples, held_out) = sample_points(t, degree);
    let mut ys = Vec::with_capacity(samples.len());
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for s in &samples {
        let m = to_matrix(&op.eval(s).to_float());
        let (value, r, _) = cluster_value(&m, &q);
        residual = residual.max(r);
        scale = scale.max(value.abs()).max(max_abs(&m));
        ys.push(value);
    }
    let xs: Vec<f64> = samples.iter().map(Scalar::to_f64).collect();
    let p = Poly::new(interpolate(&xs, &ys)?);
    let m = to_matrix(&op.eval(&held_out).to_float());
    let (value, r, _) = cluster_value(&m, &q);
    residual = residual.max(r);
    scale = scale.max(max_abs(&m));
    let predicted = p.eval(&held_out.to_f64());
    let held = (predicted - value).abs() / scale.max(f64::MIN_POSITIVE);
    Ok((p, residual.max(held)))
}

/// Splits `(C^N)^{⊗n}` for the family `{T_λ(t) : |λ| ≤ bound}`.
pub fn eigenspaces_for_instance(
    inst: &GaudinInstance,
    t: &Rational,
    bound: usize,
    tol: &Tolerances,
    rng: &mut ChaCha8Rng,
    exec: Execution,
) -> Result<EigenspaceDecomposition> {
    let family = build_family(inst, &Partition::up_to(bound), exec)?;
    let at_t: Vec<(Partition, TensorOperator<f64>)> =
        family.into_iter().map(|(l, op)| (l, op.eval(t).to_float())).collect();
    simultaneous_eigenspaces(&at_t, tol, rng)
}
