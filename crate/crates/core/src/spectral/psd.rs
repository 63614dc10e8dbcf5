//! Exact positive (semi)definiteness certificates for symmetric rational
//! matrices, and the sweep over `T_λ(t)` for a given instance.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::combinatorics::Partition;
use crate::error::{domain, Result};
use crate::gaudin::{build_t_definitional, GaudinInstance};
use crate::linalg::{charpoly, leading_minors_until_nonpositive};
use crate::par::{self, Execution};
use crate::report::Report;
use crate::scalar::{format_rational, signum, Rational};
use crate::tensor::TensorOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Positive definite.
    Pd,
    /// Positive semidefinite and singular.
    Psd,
    Indefinite,
}

impl Verdict {
    pub fn is_psd(self) -> bool {
        self != Verdict::Indefinite
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdCertificate {
    /// sha256 of the operator dump.
    pub matrix_hash: String,
    pub verdict: Verdict,
    /// Signs of `(-1)^{d-i} c_i` for `det(xI - A) = Σ c_i x^i`.
    pub charpoly_signs: Vec<i32>,
    /// Signs of the leading principal minors, up to the first nonpositive one.
    pub leading_minor_signs: Vec<i32>,
    /// `v` with `vᵀAv < 0`, when indefinite.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rationals")]
    pub negative_direction: Option<Vec<Rational>>,
}

mod opt_rationals {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|xs| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|xs| xs.iter().map(|x| parse_rational(x).map_err(serde::de::Error::custom)).collect()).transpose()
    }
}

fn quadratic_form(a: &[Vec<Rational>], v: &[Rational]) -> Rational {
    a.iter()
        .zip(v)
        .filter(|(_, vi)| !vi.is_zero())
        .map(|(row, vi)| vi * row.iter().zip(v).map(|(x, y)| x * y).sum::<Rational>())
        .sum()
}

/// Symmetric elimination by congruence `M = Bᵀ A B`. Returns a direction of
/// negative curvature, or `None` when `A` is PSD.
fn negative_direction(a: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut b: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let column = |b: &Vec<Vec<Rational>>, j: usize| -> Vec<Rational> { b.iter().map(|row| row[j].clone()).collect() };
    let mut remaining: Vec<usize> = (0..n).collect();
    loop {
        if let Some(&j) = remaining.iter().find(|&&j| m[j][j].is_negative()) {
            return Some(column(&b, j));
        }
        let Some(pos) = remaining.iter().position(|&j| m[j][j].is_positive()) else {
            // all remaining diagonal entries vanish
            for &j in &remaining {
                for &l in &remaining {
                    if l != j && !m[j][l].is_zero() {
                        // (s e_j + e_l)ᵀ M (s e_j + e_l) = 2 s M_jl + M_ll = -1
                        let s = -(&m[l][l] + Rational::one()) / (Rational::from_integer(2.into()) * &m[j][l]);
                        let cj = column(&b, j);
                        let cl = column(&b, l);
                        return Some(cj.iter().zip(&cl).map(|(x, y)| &s * x + y).collect());
                    }
                }
            }
            return None;
        };
        let k = remaining.remove(pos);
        for &j in &remaining {
            if m[k][j].is_zero() {
                continue;
            }
            let f = &m[k][j] / &m[k][k];
            // column j -= f column k, then row j -= f row k
            for row in b.iter_mut() {
                let d = &f * &row[k];
                row[j] -= d;
            }
            for r in 0..n {
                let d = &f * &m[r][k];
                m[r][j] -= d;
            }
            for c in 0..n {
                let d = &f * &m[k][c];
                m[j][c] -= d;
            }
        }
    }
}

pub fn matrix_hash(a: &TensorOperator<Rational>) -> String {
    let text = serde_json::to_string(&a.to_dump()).expect("dump serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Certifies `A` as PD, PSD or indefinite. The PSD verdict comes from the
/// characteristic-polynomial signs and is cross-checked against symmetric
/// elimination; PD additionally requires positive leading minors.
pub fn certify_psd_exact(a: &TensorOperator<Rational>) -> Result<PsdCertificate> {
    if !a.is_symmetric() {
        return domain("PSD certification needs a symmetric matrix");
    }
    let rows = a.rows();
    let d = rows.len();
    let cp = charpoly(&rows);
    let charpoly_signs: Vec<i32> =
        cp.iter().enumerate().map(|(i, c)| if (d - i).is_multiple_of(2) { signum(c) } else { -signum(c) }).collect();
    let psd_by_charpoly = charpoly_signs.iter().all(|&s| s >= 0);
    let witness = negative_direction(&rows);
    if psd_by_charpoly != witness.is_none() {
        return Err(crate::Error::Precondition("characteristic polynomial and elimination disagree".into()));
    }
    let minors = leading_minors_until_nonpositive(&rows);
    let leading_minor_signs: Vec<i32> = minors.iter().map(signum).collect();
    let pd = minors.len() == d && leading_minor_signs.iter().all(|&s| s > 0);
    let verdict = match (psd_by_charpoly, pd) {
        (_, true) => Verdict::Pd,
        (true, false) => Verdict::Psd,
        (false, _) => Verdict::Indefinite,
    };
    Ok(PsdCertificate {
        matrix_hash: matrix_hash(a),
        verdict,
        charpoly_signs,
        leading_minor_signs,
        negative_direction: witness,
    })
}

impl PsdCertificate {
    /// Re-derives the verdict from the recorded witness data and checks the
    /// hash and negative direction against `a`.
    pub fn recheck(&self, a: &TensorOperator<Rational>) -> bool {
        if matrix_hash(a) != self.matrix_hash {
            return false;
        }
        let d = a.dim();
        let psd = self.charpoly_signs.iter().all(|&s| s >= 0);
        let pd = self.leading_minor_signs.len() == d && self.leading_minor_signs.iter().all(|&s| s > 0);
        let expected = if pd {
            Verdict::Pd
        } else if psd {
            Verdict::Psd
        } else {
            Verdict::Indefinite
        };
        let witness_ok = match &self.negative_direction {
            Some(v) => quadratic_form(&a.rows(), v).is_negative(),
            None => psd,
        };
        expected == self.verdict && witness_ok
    }
}

/// Whether `(h, t)` satisfy the semidefinite hypotheses `h_i ≥ 0`,
/// `t ≥ −z_k`, and the definite ones `h_i > 0`, `t > −z_k`.
pub fn psd_hypotheses(inst: &GaudinInstance, t: &Rational) -> (bool, bool) {
    let weak = inst.h.iter().all(|x| !x.is_negative()) && inst.z.iter().all(|z| !(t + z).is_negative());
    let strict = inst.h.iter().all(|x| x.is_positive()) && inst.z.iter().all(|z| (t + z).is_positive());
    (weak, strict)
}

/// Certifies every `T_λ(t)` with `|λ| ≤ bound`. Under the hypotheses each is
/// required PSD, and PD when the strict hypotheses hold and `ℓ(λ) ≤ N`.
/// Outside the hypotheses the verdicts are recorded with a warning.
pub fn verify_psd_theorem(inst: &GaudinInstance, t: &Rational, bound: usize, exec: Execution) -> Result<Report> {
    inst.validate()?;
    let (weak, strict) = psd_hypotheses(inst, t);
    let partitions = Partition::up_to(bound);
    let certs = par::map(exec, &partitions, |lambda| -> Result<PsdCertificate> {
        let op = build_t_definitional(lambda, inst, Execution::Sequential)?.eval(t);
        certify_psd_exact(&op)
    });
    let mut report = Report::new("psd");
    if !weak {
        report.warn(format!(
            "hypotheses unmet (h = [{}], t = {}): verdicts are informational",
            inst.h.iter().map(format_rational).collect::<Vec<_>>().join(", "),
            format_rational(t)
        ));
    }
    for (lambda, cert) in partitions.iter().zip(certs) {
        let cert = cert?;
        let need_pd = strict && lambda.length() <= inst.n_dim;
        let ok = if !weak {
            true
        } else if need_pd {
            cert.verdict == Verdict::Pd
        } else {
            cert.verdict.is_psd()
        };
        let expect = if !weak {
            "-"
        } else if need_pd {
            "PD"
        } else {
            "PSD"
        };
        report.check(
            format!("T_{lambda}(t)"),
            ok,
            format!("verdict {:?}, required {expect}, sha256 {}", cert.verdict, &cert.matrix_hash[..16]),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::alpha_element;
    use crate::scalar::{int, rat};

    fn op(rows: &[&[i64]]) -> TensorOperator<Rational> {
        let d = rows.len();
        let n_dim = if d == 4 { 2 } else { d };
        let factors: Vec<usize> = if d == 4 { vec![1, 2] } else { vec![1] };
        TensorOperator::from_entries(&factors, n_dim, rows.iter().flat_map(|r| r.iter().map(|&x| int(x))).collect())
            .unwrap()
    }

    #[test]
    fn zero_matrix_is_psd_not_pd() {
        let c = certify_psd_exact(&op(&[&[0, 0], &[0, 0]])).unwrap();
        assert_eq!(c.verdict, Verdict::Psd);
        assert!(c.recheck(&op(&[&[0, 0], &[0, 0]])));
    }

    #[test]
    fn indefinite_with_witness() {
        let a = op(&[&[1, 0], &[0, -1]]);
        let c = certify_psd_exact(&a).unwrap();
        assert_eq!(c.verdict, Verdict::Indefinite);
        assert!(c.recheck(&a));
        let hidden = op(&[&[0, 1], &[1, 0]]);
        let c = certify_psd_exact(&hidden).unwrap();
        assert_eq!(c.verdict, Verdict::Indefinite);
        assert!(c.recheck(&hidden));
    }

    #[test]
    fn positive_definite_and_non_symmetric() {
        let a = op(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(certify_psd_exact(&a).unwrap().verdict, Verdict::Pd);
        assert!(certify_psd_exact(&op(&[&[1, 2], &[0, 1]])).is_err());
    }

    #[test]
    fn alpha_images_are_psd() {
        for lambda in Partition::all_of_size(3) {
            let a = TensorOperator::group_algebra_operator(&alpha_element(&lambda, &[1, 2, 3]).unwrap(), &[1, 2, 3], 2)
                .unwrap();
            assert!(certify_psd_exact(&a).unwrap().verdict.is_psd());
        }
    }

    #[test]
    fn desk_instance_is_definite() {
        let inst = GaudinInstance::new(vec![int(1), int(2)], vec![int(1), int(3)]).unwrap();
        let r = verify_psd_theorem(&inst, &int(0), 4, Execution::default()).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert!(r.warnings.is_empty());
        assert!(r.checks.iter().filter(|c| c.detail.contains("required PD")).count() >= 8);
    }

    #[test]
    fn boundary_case_is_semidefinite() {
        let inst = GaudinInstance::new(vec![int(0), int(1)], vec![int(1), int(3)]).unwrap();
        let r = verify_psd_theorem(&inst, &int(-1), 2, Execution::default()).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn negative_h_is_flagged() {
        let inst = GaudinInstance::new(vec![int(-1), int(1)], vec![rat(1, 2), int(2)]).unwrap();
        let r = verify_psd_theorem(&inst, &int(0), 2, Execution::default()).unwrap();
        assert!(r.passed());
        assert!(r.warnings[0].contains("hypotheses unmet"));
    }
}
