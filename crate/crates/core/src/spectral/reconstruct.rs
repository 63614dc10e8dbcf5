//! Rebuilding the space of quasi-exponentials attached to a joint eigenspace
//! from the eigenvalues of `T_λ(t)`, and the universality and positivity
//! pipelines built on it.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eigen::{build_family, eigenvalue_polynomial, simultaneous_eigenspaces, Eigenspace};
use super::Tolerances;
use crate::combinatorics::{Partition, Permutation};
use crate::error::Result;
use crate::gaudin::GaudinInstance;
use crate::par::{self, Execution};
use crate::poly::Poly;
use crate::quasiexp::{minor_rows, PlueckerVector};
use crate::report::Report;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::tensor::TensorOperator;

/// Truncated power series in `w = u − t`.
type Series = Vec<f64>;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn derivative(s: &Series, r: usize) -> Series {
    (r..s.len()).map(|e| s[e] * factorial(e) / factorial(e - r)).collect()
}

fn mul(a: &Series, b: &Series, len: usize) -> Series {
    let mut out = vec![0.0; len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `min_c ‖a − c b‖_max / ‖a‖_max` with `c` from least squares.
fn projective_residual(a: &[f64], b: &[f64]) -> f64 {
    let bb: f64 = b.iter().map(|x| x * x).sum();
    let c = if bb > 0.0 { a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / bb } else { 0.0 };
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - c * y).abs()));
    diff / max_abs(a).max(f64::MIN_POSITIVE)
}

/// The space attached to one eigenspace, as `N` series about `u = t`, and
/// the residuals of its three reconstruction checks and the operator check.
#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    /// `basis[j][e]`: coefficient of `w^e` in `∂_t^j g`.
    pub basis: Vec<Series>,
    /// Wronskian against `e^{(Σh)u}(u+z_1)⋯(u+z_n)`.
    pub wronskian_residual: f64,
    /// Plücker vector of the basis against the eigenvalue vector.
    pub plucker_residual: f64,
    /// Least-squares fit by `Σ_c e^{cu}·(polynomial)`.
    pub fit_residual: f64,
    /// `Σ_i (−1)^i T_{(1^i)} ∂^{N−i}` applied to the basis.
    pub operator_residual: f64,
    #[serde(skip)]
    pub plucker: PlueckerVector<f64>,
    #[serde(skip)]
    pub eigenvalues: PlueckerVector<f64>,
}

/// Partitions whose eigenvalue polynomials a reconstruction needs.
pub fn needed_partitions(n_dim: usize, bound: usize, truncation: usize) -> Vec<Partition> {
    let mut all: Vec<Partition> = Partition::up_to(bound);
    all.extend((0..=truncation).map(Partition::row));
    all.extend((0..=n_dim).map(Partition::column));
    all.sort();
    all.dedup();
    all
}

/// Default truncation: enough coefficients for the Plücker check and an
/// overdetermined quasi-exponential fit.
pub fn default_truncation(inst: &GaudinInstance, bound: usize) -> usize {
    let groups = inst.h.iter().unique().count();
    (inst.n + bound + inst.n_dim + 2).max(groups * inst.n + inst.n_dim + bound + 2)
}

/// Rebuilds `V_E` from eigenvalue polynomials `P_λ` via
/// `g(t,u) = Σ_i P_{(i)}(t)/(N+i−1)!·(u−t)^{N+i−1}` and its `t`-derivatives,
/// then runs the Wronskian, Plücker, fit and operator checks.
pub fn reconstruct_space(
    inst: &GaudinInstance,
    polys: &BTreeMap<Partition, Poly<f64>>,
    t: &Rational,
    bound: usize,
    truncation: usize,
) -> Result<Reconstruction> {
    let n = inst.n_dim;
    let tf = t.to_f64();
    let len = truncation + 1;
    // derivs[i][k] = P_{(i)}^{(k)}(t)
    let derivs: Vec<Vec<f64>> = (0..=truncation)
        .map(|i| {
            let mut p = polys[&Partition::row(i)].clone();
            (0..n)
                .map(|_| {
                    let v = p.eval(&tf);
                    p = p.derivative();
                    v
                })
                .collect()
        })
        .collect();
    let binom = |j: usize, k: usize| factorial(j) / (factorial(k) * factorial(j - k));
    let basis: Vec<Series> = (0..n)
        .map(|j| {
            (0..len)
                .map(|e| {
                    (0..=j)
                        .filter_map(|k| {
                            let i = (e + k + 1).checked_sub(n)?;
                            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                            Some(binom(j, k) * derivs[i][j - k] * sign / factorial(e))
                        })
                        .sum()
                })
                .collect()
        })
        .collect();

    // (a) Wronskian
    let wlen = len - (n - 1);
    let derived: Vec<Vec<Series>> = (0..n).map(|r| basis.iter().map(|f| derivative(f, r)).collect()).collect();
    let cols: Vec<usize> = (0..n).collect();
    let mut wr = vec![0.0; wlen];
    for perm in Permutation::all(&cols.iter().map(|c| c + 1).collect::<Vec<_>>()) {
        let sign = perm.sign() as f64;
        let mut term = vec![0.0; wlen];
        term[0] = sign;
        for (r, &img) in perm.images().iter().enumerate() {
            term = mul(&term, &derived[r][img - 1], wlen);
        }
        for (w, x) in wr.iter_mut().zip(term) {
            *w += x;
        }
    }
    let sigma: f64 = inst.h.iter().map(Scalar::to_f64).sum();
    let exp_series: Series = (0..wlen).map(|a| sigma.powi(a as i32) / factorial(a)).collect();
    let sites = inst.site_polynomial().map(Scalar::to_f64).compose_shift(&tf);
    let expected = mul(&exp_series, &sites.coeffs().to_vec(), wlen);
    let wronskian_residual = projective_residual(&wr, &expected);

    // (b) Plücker vector against eigenvalues
    let partitions = Partition::up_to(bound);
    let taylor =
        |r: usize| -> Vec<f64> { basis.iter().map(|f| f.get(r).copied().unwrap_or(f64::NAN) * factorial(r)).collect() };
    let minors: Vec<(Partition, f64)> = partitions
        .iter()
        .map(|lambda| {
            let value = match minor_rows(lambda, n) {
                Some(rows) => DMatrix::from_fn(n, n, |i, j| taylor(rows[i])[j]).determinant(),
                None => 0.0,
            };
            (lambda.clone(), value)
        })
        .collect();
    let plucker = PlueckerVector::from_entries(n, bound, minors);
    let eigenvalues =
        PlueckerVector::from_entries(n, bound, partitions.iter().map(|l| (l.clone(), polys[l].eval(&tf))).collect());
    let plucker_residual = plucker.relative_distance(&eigenvalues);

    // (c) fit by e^{cw}·w^a, a ≤ n_sites + m_c − 1
    let mut groups: Vec<(Rational, usize)> = Vec::new();
    for h in &inst.h {
        match groups.iter_mut().find(|(c, _)| c == h) {
            Some((_, m)) => *m += 1,
            None => groups.push((h.clone(), 1)),
        }
    }
    let columns: Vec<(f64, usize)> =
        groups.iter().flat_map(|(c, m)| (0..inst.n + m).map(move |a| (c.to_f64(), a))).collect();
    let design = DMatrix::from_fn(len, columns.len(), |e, k| {
        let (c, a) = columns[k];
        if e >= a {
            c.powi((e - a) as i32) / factorial(e - a)
        } else {
            0.0
        }
    });
    let svd = design.clone().svd(true, true);
    let mut fit_residual = 0.0f64;
    for f in &basis {
        let rhs = DVector::from_column_slice(f);
        let fitted = match svd.solve(&rhs, 1e-14) {
            Ok(x) => &design * x,
            Err(_) => DVector::from_element(len, f64::NAN),
        };
        let diff = (fitted - &rhs).amax();
        fit_residual = fit_residual.max(diff / rhs.amax().max(f64::MIN_POSITIVE));
    }

    // operator with single-column coefficients annihilates the basis
    let olen = len - n;
    let coeffs: Vec<Series> = (0..=n)
        .map(|i| {
            let mut c = polys[&Partition::column(i)].compose_shift(&tf).coeffs().to_vec();
            c.resize(olen.max(c.len()), 0.0);
            c
        })
        .collect();
    let coeff_scale = coeffs.iter().map(|c| max_abs(c)).fold(0.0f64, f64::max);
    let mut operator_residual = 0.0f64;
    for f in &basis {
        let mut total = vec![0.0; olen];
        let mut scale = 0.0f64;
        for (i, c) in coeffs.iter().enumerate() {
            let d = derivative(f, n - i);
            scale = scale.max(coeff_scale * max_abs(&d[..olen]));
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            for (x, y) in total.iter_mut().zip(mul(c, &d, olen)) {
                *x += sign * y;
            }
        }
        operator_residual = operator_residual.max(max_abs(&total) / scale.max(f64::MIN_POSITIVE));
    }

    Ok(Reconstruction {
        basis,
        wronskian_residual,
        plucker_residual,
        fit_residual,
        operator_residual,
        plucker,
        eigenvalues,
    })
}

/// Settings shared by the universality and positivity pipelines.
#[derive(Clone, Debug)]
pub struct SpectralRun {
    pub bound: usize,
    pub truncation: Option<usize>,
    pub tol: Tolerances,
    pub seed: u64,
}

/// Eigenspaces plus a reconstruction for each one.
pub struct UniversalRun {
    pub report: Report,
    pub spaces: Vec<Eigenspace>,
    pub reconstructions: Vec<Reconstruction>,
}

/// Splits `(C^N)^{⊗n}` into joint eigenspaces of `{T_λ(t) : |λ| ≤ bound}`,
/// interpolates eigenvalue polynomials and reconstructs every space.
pub fn verify_universal_coordinates(
    inst: &GaudinInstance,
    t: &Rational,
    run: &SpectralRun,
    exec: Execution,
) -> Result<UniversalRun> {
    inst.validate()?;
    let tol = &run.tol;
    let truncation = run.truncation.unwrap_or_else(|| default_truncation(inst, run.bound));
    let needed = needed_partitions(inst.n_dim, run.bound, truncation);
    let family = build_family(inst, &needed, exec)?;
    let ops: BTreeMap<Partition, _> = family.into_iter().collect();
    let at_t: Vec<(Partition, TensorOperator<f64>)> = Partition::up_to(run.bound)
        .into_iter()
        .map(|l| {
            let op = ops[&l].eval(t).to_float();
            (l, op)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let dec = simultaneous_eigenspaces(&at_t, tol, &mut rng)?;

    let mut report = Report::new("universal");
    let full = inst.n_dim.pow(inst.n as u32);
    report.check("dimensions sum to N^n", dec.total_dim() == full, format!("{} of {full}", dec.total_dim()));
    report.check_residual("cluster orthogonality", dec.orthogonality, tol.cluster);
    report.check_residual("family acts by scalars", dec.action_residual, tol.eigenvalue);
    report.check_residual("Rayleigh quotients agree", dec.rayleigh_spread, tol.eigenvalue);

    let sites = inst.site_polynomial().map(Scalar::to_f64);
    let results = par::map(exec, &dec.spaces, |space| -> Result<(Reconstruction, f64, f64)> {
        let mut polys = BTreeMap::new();
        let mut interp = 0.0f64;
        for l in &needed {
            let (p, r) = eigenvalue_polynomial(&ops[l], space, t, inst.n)?;
            interp = interp.max(r);
            polys.insert(l.clone(), p);
        }
        let empty = &polys[&Partition::empty()];
        let scale = max_abs(sites.coeffs()).max(1.0);
        let empty_err = (0..=inst.n).map(|i| (empty.coeff(i) - sites.coeff(i)).abs()).fold(0.0f64, f64::max) / scale;
        let rec = reconstruct_space(inst, &polys, t, run.bound, truncation)?;
        Ok((rec, interp, empty_err))
    });
    let mut reconstructions = Vec::with_capacity(results.len());
    for (idx, res) in results.into_iter().enumerate() {
        let (rec, interp, empty_err) = res?;
        let tag = format!("space {idx} (dim {})", dec.spaces[idx].dim());
        report.check_residual(
            format!("{tag}: eigenvalue interpolation"),
            interp,
            tol.eigenvalue.max(tol.reconstruction),
        );
        report.check_residual(format!("{tag}: T_∅ eigenvalue is (t+z_1)⋯(t+z_n)"), empty_err, tol.eigenvalue);
        report.check_residual(format!("{tag}: (a) Wronskian"), rec.wronskian_residual, tol.reconstruction);
        report.check_residual(format!("{tag}: (b) Plücker vs eigenvalues"), rec.plucker_residual, tol.reconstruction);
        report.check_residual(format!("{tag}: (c) quasi-exponential fit"), rec.fit_residual, tol.reconstruction);
        report.check_residual(
            format!("{tag}: column operator annihilates V"),
            rec.operator_residual,
            tol.reconstruction,
        );
        reconstructions.push(rec);
    }
    Ok(UniversalRun { report, spaces: dec.spaces, reconstructions })
}

/// Total nonnegativity of every reconstructed space about `u = t`:
/// the Plücker vector for `|λ| ≤ bound` is one-signed within `tol.sign`.
/// Outside `h_i ≥ 0`, `t ≥ max(−z_k)` the result is informational.
pub fn verify_positivity(inst: &GaudinInstance, t: &Rational, run: &SpectralRun, exec: Execution) -> Result<Report> {
    let hyp = inst.h.iter().all(|h| !h.is_negative()) && inst.z.iter().all(|z| !(t + z).is_negative());
    let universal = verify_universal_coordinates(inst, t, run, exec)?;
    let mut report = Report::new("positivity");
    if !hyp {
        report.warn(format!(
            "hypotheses unmet (h ≥ 0 and t ≥ max(−z) required, t = {}): sign checks are informational",
            format_rational(t)
        ));
    }
    report.absorb("", universal.report);
    for (idx, rec) in universal.reconstructions.iter().enumerate() {
        let defect = rec.plucker.sign_defect();
        let name = format!("space {idx}: Plücker vector one-signed, |λ| ≤ {}", run.bound);
        if hyp {
            report.check_residual(name, defect, run.tol.sign);
        } else {
            report.check(name, true, format!("sign defect {defect:.3e}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn run(bound: usize) -> SpectralRun {
        SpectralRun { bound, truncation: None, tol: Tolerances::default(), seed: 11 }
    }

    #[test]
    fn one_dimensional_theory() {
        let inst = GaudinInstance::new(vec![rat(1, 2)], vec![int(1), int(2)]).unwrap();
        let u = verify_universal_coordinates(&inst, &int(0), &run(3), Execution::default()).unwrap();
        assert!(u.report.passed(), "{}", u.report.summary());
        assert_eq!(u.spaces.len(), 1);
    }

    #[test]
    fn desk_instance_passes() {
        let inst = GaudinInstance::new(vec![int(1), int(2)], vec![int(1), int(3)]).unwrap();
        let u = verify_universal_coordinates(&inst, &int(0), &run(3), Execution::default()).unwrap();
        assert!(u.report.passed(), "{}", u.report.summary());
        assert_eq!(u.spaces.len(), 4);
    }

    #[test]
    fn polynomial_case_matches_known_fiber() {
        // The fiber over (u+1)(u+2) consists of ⟨1, u³/3 + 3u²/2 + 2u⟩ and
        // ⟨u + 3/2, u² − 2⟩.
        use crate::quasiexp::QuasiExpSpace;
        let inst = GaudinInstance::new(vec![int(0), int(0)], vec![int(1), int(2)]).unwrap();
        let u = verify_universal_coordinates(&inst, &int(0), &run(3), Execution::default()).unwrap();
        assert!(u.report.passed(), "{}", u.report.summary());
        let q = |c: &[Rational]| Poly::new(c.to_vec());
        let oracle = [
            (
                3,
                QuasiExpSpace::from_exp_polys(&[
                    (int(0), q(&[int(1)])),
                    (int(0), q(&[int(0), int(2), rat(3, 2), rat(1, 3)])),
                ]),
            ),
            (
                1,
                QuasiExpSpace::from_exp_polys(&[
                    (int(0), q(&[rat(3, 2), int(1)])),
                    (int(0), q(&[int(-2), int(0), int(1)])),
                ]),
            ),
        ];
        assert_eq!(u.spaces.len(), 2);
        for (dim, space) in oracle {
            let expected = space.unwrap().plucker_vector(&int(0), 3).to_f64();
            let idx = u.spaces.iter().position(|s| s.dim() == dim).unwrap();
            assert!(u.reconstructions[idx].eigenvalues.relative_distance(&expected) < 1e-10);
        }
    }

    #[test]
    fn positivity_holds_right_of_the_zeros() {
        let inst = GaudinInstance::new(vec![rat(1, 2), int(2)], vec![int(1), rat(-1, 2), int(2)]).unwrap();
        let r = verify_positivity(&inst, &int(1), &run(4), Execution::default()).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert!(r.warnings.is_empty());
    }
}
