//! The named verification suites behind `gaudin-lab verify`, plus the seeded
//! generators and closed forms they draw on.

mod config;
mod examples;
mod random;

pub use config::{Backend, RunConfig};
pub use examples::{beta_closed_form, t_closed_form, verify_examples};
pub use random::{
    distinct_rationals, random_admissible, random_generic, random_instance, random_polynomial_space,
    random_quasi_space, random_rational,
};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::gaudin::{
    build_beta, build_t_definitional, build_t_jacobi_trudi_from, build_t_partial_trace, single_columns,
    verify_four_ways, verify_trace_identities, GaudinInstance, OperatorPolynomial,
};
use crate::par::{self, Execution};
use crate::quasiexp::{verify_dual_jacobi_trudi, verify_jacobi_trudi, verify_translation_identity, QuasiExpSpace};
use crate::report::Report;
use crate::scalar::{int, Rational};
use crate::spectral::{verify_positivity, verify_psd_theorem, verify_universal_coordinates};
use crate::symfunc::{schur_dual_jacobi_trudi, schur_eval, schur_jacobi_trudi};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Routes,
    Commute,
    Jt,
    DualJt,
    Translation,
    BetaSpecialization,
    TraceIdentities,
    Psd,
    Universal,
    Positivity,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Routes,
        Suite::Commute,
        Suite::Jt,
        Suite::DualJt,
        Suite::Translation,
        Suite::BetaSpecialization,
        Suite::TraceIdentities,
        Suite::Psd,
        Suite::Universal,
        Suite::Positivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Routes => "routes",
            Suite::Commute => "commute",
            Suite::Jt => "jt",
            Suite::DualJt => "dual-jt",
            Suite::Translation => "translation",
            Suite::BetaSpecialization => "beta-specialization",
            Suite::TraceIdentities => "trace-identities",
            Suite::Psd => "psd",
            Suite::Universal => "universal",
            Suite::Positivity => "positivity",
        }
    }

    /// Whether the suite is decided in exact arithmetic.
    pub fn is_exact(self) -> bool {
        !matches!(self, Suite::Universal | Suite::Positivity)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Runs `suite` on the configured instance plus `cfg.samples` seeded extras
/// where the suite is randomized.
pub fn run_suite(suite: Suite, cfg: &RunConfig, exec: Execution) -> Result<Report> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let inst = &cfg.instance;
    let mut report = match suite {
        Suite::Routes => {
            let mut r = Report::new("routes");
            for (i, inst) in with_samples(inst, cfg.samples, &mut rng).iter().enumerate() {
                r.absorb(&format!("instance {i}: "), route_agreement(inst, cfg.bound, exec)?);
                r.absorb(&format!("instance {i}: "), verify_examples(inst)?);
            }
            r
        }
        Suite::Commute => {
            let mut r = Report::new("commute");
            for (i, inst) in with_samples(inst, cfg.samples, &mut rng).iter().enumerate() {
                let pairs: Vec<(Rational, Rational)> =
                    (0..3).map(|_| (random_rational(&mut rng, -3, 3), random_rational(&mut rng, -3, 3))).collect();
                r.absorb(&format!("instance {i}: "), commutation(inst, cfg.bound.min(3), &pairs, exec)?);
            }
            r
        }
        Suite::Jt | Suite::DualJt => {
            let dual = suite == Suite::DualJt;
            let mut r = Report::new(suite.name());
            let spaces = sample_spaces(inst.n_dim, cfg.samples, &mut rng);
            for (i, v) in spaces.iter().enumerate() {
                r.absorb(&format!("space {i}: "), jacobi_trudi_suite(v, cfg.bound, &cfg.t, dual)?);
            }
            r.absorb("", schur_reduction(&inst.h, cfg.bound)?);
            r
        }
        Suite::Translation => {
            let mut r = Report::new("translation");
            for (i, v) in sample_spaces(inst.n_dim, cfg.samples, &mut rng).iter().enumerate() {
                for mu in Partition::up_to(cfg.bound.min(2)) {
                    r.absorb(&format!("space {i}: "), verify_translation_identity(v, &mu, &cfg.t, cfg.bound)?);
                }
            }
            r
        }
        Suite::BetaSpecialization => beta_specialization(inst, cfg.bound, exec)?,
        Suite::TraceIdentities => {
            let mut r = verify_trace_identities(&inst.h, cfg.bound.min(4), 2, exec)?;
            if inst.h.iter().all(|h| !h.is_zero()) {
                r.absorb("", verify_four_ways(&inst.h, cfg.bound.min(4), 2)?);
            } else {
                r.warn("four-ways identity skipped: needs every h_i nonzero");
            }
            r
        }
        Suite::Psd => verify_psd_theorem(inst, &cfg.t, cfg.bound, exec)?,
        Suite::Universal => verify_universal_coordinates(inst, &cfg.t, &cfg.spectral_run(), exec)?.report,
        Suite::Positivity => verify_positivity(inst, &cfg.t, &cfg.spectral_run(), exec)?,
    };
    report.suite = suite.name().to_string();
    Ok(report)
}

fn with_samples(inst: &GaudinInstance, samples: usize, rng: &mut ChaCha8Rng) -> Vec<GaudinInstance> {
    let mut out = vec![inst.clone()];
    out.extend((0..samples).map(|_| random_instance(rng, inst.n_dim, inst.n)));
    out
}

/// `2·samples` polynomial spaces and `samples` quasi-exponential spaces.
fn sample_spaces(n_dim: usize, samples: usize, rng: &mut ChaCha8Rng) -> Vec<QuasiExpSpace> {
    let mut out: Vec<QuasiExpSpace> =
        (0..2 * samples).map(|_| random_polynomial_space(rng, n_dim, n_dim + 2)).collect();
    out.extend((0..samples).map(|_| random_quasi_space(rng, n_dim, 2)));
    out
}

/// Definitional, partial-trace (two values of `m`) and dual Jacobi–Trudi
/// constructions of `T_λ(u)` coincide for `|λ| ≤ bound`, and have degree `≤ n`.
pub fn route_agreement(inst: &GaudinInstance, bound: usize, exec: Execution) -> Result<Report> {
    let mut report = Report::new("routes");
    let tag = format!("N={} n={}", inst.n_dim, inst.n);
    let columns = single_columns(inst, exec)?;
    let partitions = Partition::up_to(bound);
    let results = par::map(exec, &partitions, |lambda| -> Result<Vec<(String, bool)>> {
        let def = build_t_definitional(lambda, inst, Execution::Sequential)?;
        let m0 = inst.n.max(lambda.size());
        let mut out = Vec::new();
        for m in [m0, m0 + 1] {
            let pt = build_t_partial_trace(lambda, inst, Some(m), Execution::Sequential)?;
            out.push((format!("T_{lambda} partial trace m={m}, {tag}"), pt == def));
        }
        let jt = build_t_jacobi_trudi_from(lambda, inst, &columns, Execution::Sequential)?;
        out.push((format!("T_{lambda} Jacobi–Trudi, {tag}"), jt == def));
        out.push((format!("T_{lambda} degree ≤ n, {tag}"), def.degree().is_none_or(|d| d <= inst.n)));
        Ok(out)
    });
    for r in results {
        for (name, ok) in r? {
            report.check(name, ok, "");
        }
    }
    Ok(report)
}

/// `[T_λ(u₀), T_μ(v₀)] = 0` for all `|λ|, |μ| ≤ bound` and each pair `(u₀, v₀)`.
pub fn commutation(
    inst: &GaudinInstance,
    bound: usize,
    pairs: &[(Rational, Rational)],
    exec: Execution,
) -> Result<Report> {
    let mut report = Report::new("commute");
    let partitions = Partition::up_to(bound);
    let ops: Vec<OperatorPolynomial<Rational>> =
        par::map(exec, &partitions, |l| build_t_definitional(l, inst, Execution::Sequential))
            .into_iter()
            .collect::<Result<_>>()?;
    for (u0, v0) in pairs {
        let at_u: Vec<_> = ops.iter().map(|p| p.eval(u0)).collect();
        let at_v: Vec<_> = ops.iter().map(|p| p.eval(v0)).collect();
        let index: Vec<(usize, usize)> =
            (0..partitions.len()).flat_map(|i| (0..partitions.len()).map(move |j| (i, j))).collect();
        let results = par::map(exec, &index, |&(i, j)| -> Result<bool> {
            let ab = at_u[i].matmul(&at_v[j])?;
            let ba = at_v[j].matmul(&at_u[i])?;
            Ok(ab == ba)
        });
        let mut failures = Vec::new();
        for (&(i, j), ok) in index.iter().zip(results) {
            if !ok? {
                failures.push(format!("({}, {})", partitions[i], partitions[j]));
            }
        }
        report.check(
            format!("N={} n={} u₀={u0} v₀={v0}: {} pairs", inst.n_dim, inst.n, index.len()),
            failures.is_empty(),
            failures.join(" "),
        );
    }
    Ok(report)
}

/// `T_λ(u)` at `h = 0` equals `β_λ(u)` for `|λ| ≤ bound`.
pub fn beta_specialization(inst: &GaudinInstance, bound: usize, exec: Execution) -> Result<Report> {
    let mut report = Report::new("beta-specialization");
    let zero = inst.with_zero_h();
    let partitions = Partition::up_to(bound);
    let results = par::map(exec, &partitions, |l| -> Result<bool> {
        Ok(build_t_definitional(l, &zero, Execution::Sequential)? == build_beta(l, inst)?)
    });
    for (l, ok) in partitions.iter().zip(results) {
        report.check(format!("T_{l}|h=0 = β_{l}, N={} n={}", inst.n_dim, inst.n), ok?, "");
    }
    Ok(report)
}

/// Jacobi–Trudi (or its dual) for every `|λ| ≤ bound` at the smallest
/// admissible `m` and one above it. The evaluation point moves off `t` in
/// unit steps when `t` is a zero of the Wronskian.
pub fn jacobi_trudi_suite(v: &QuasiExpSpace, bound: usize, t: &Rational, dual: bool) -> Result<Report> {
    let mut report = Report::new(if dual { "dual-jt" } else { "jt" });
    let wr = v.minor_function(&Partition::empty());
    let mut point = t.clone();
    while wr.eval(&point).is_zero() {
        point += Rational::one();
    }
    if &point != t {
        report.warn(format!("t = {t} is a Wronskian zero; evaluated at {point}"));
    }
    for lambda in Partition::up_to(bound) {
        let m0 = if dual { lambda.first() } else { lambda.length() };
        for m in [m0, m0 + 1] {
            let r = if dual {
                verify_dual_jacobi_trudi(v, &lambda, m, &point)?
            } else {
                verify_jacobi_trudi(v, &lambda, m, &point)?
            };
            report.absorb("", r);
        }
    }
    Ok(report)
}

/// On `⟨e^{h_1 u}, …, e^{h_N u}⟩` with distinct `h`, `Δ_λ/Δ_∅ = s_λ(h)` at
/// `u = 0`, and both Jacobi–Trudi determinants reproduce `s_λ(h)`.
pub fn schur_reduction(h: &[Rational], bound: usize) -> Result<Report> {
    let mut report = Report::new("schur");
    let mut distinct = h.to_vec();
    distinct.sort();
    distinct.dedup();
    let plucker = if distinct.len() == h.len() {
        Some(QuasiExpSpace::pure_exponentials(h)?.plucker_vector(&int(0), bound))
    } else {
        report.warn("exponents not distinct: pure-exponential Plücker check skipped");
        None
    };
    for lambda in Partition::up_to(bound) {
        let s = schur_eval(&lambda, h);
        let jt = schur_jacobi_trudi(&lambda, h, lambda.length().max(1));
        let dual = schur_dual_jacobi_trudi(&lambda, h, lambda.first().max(1));
        report.check(format!("s_{lambda} Jacobi–Trudi"), jt == s, format!("{jt} vs {s}"));
        report.check(format!("s_{lambda} dual Jacobi–Trudi"), dual == s, format!("{dual} vs {s}"));
        if let Some(p) = &plucker {
            let ratio = p.get(&lambda).zip(p.get(&Partition::empty())).and_then(|(a, b)| {
                let (a, b) = (a.as_rational()?, b.as_rational()?);
                Some(a / b)
            });
            report.check(
                format!("Δ_{lambda}/Δ_∅ of pure exponentials is s_{lambda}(h)"),
                ratio.as_ref() == Some(&s),
                format!("{ratio:?} vs {s}"),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn exact_suites_pass_on_defaults() {
        let cfg = RunConfig { bound: 3, samples: 1, ..RunConfig::default() };
        for s in Suite::ALL.into_iter().filter(|s| s.is_exact()) {
            let r = run_suite(s, &cfg, Execution::Parallel).unwrap();
            assert!(r.passed(), "{}", r.summary());
            assert!(!r.checks.is_empty(), "{s}");
        }
    }

    #[test]
    fn commutation_detects_nothing_on_desk_instance() {
        let inst = RunConfig::default().instance;
        let r = commutation(&inst, 2, &[(int(1), int(-2))], Execution::Sequential).unwrap();
        assert!(r.passed());
    }
}
