//! Higher Gaudin Hamiltonians `T_λ(u)` and the operators `β_λ(u)` on
//! `(C^N)^{⊗n}`, as polynomials in `u` with operator coefficients.
//!
//! Three independent constructions of `T_λ(u)` are provided: the
//! matrix-derivative definition, the partial-trace formula, and the dual
//! Jacobi–Trudi determinant over single-column operators.

mod derivative;
mod oppoly;
mod routes;
mod trace_identities;

pub use derivative::matrix_derivative;
pub use oppoly::OperatorPolynomial;
pub use routes::{
    build_beta, build_t_definitional, build_t_jacobi_trudi, build_t_jacobi_trudi_from, build_t_partial_trace,
    single_columns,
};
pub use trace_identities::{verify_four_ways, verify_trace_identities};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::poly::Poly;
use crate::scalar::Rational;

/// Parameters `(N, n, h, z)` of the model. `h` lists the eigenvalues of the
/// diagonal matrix `h`; `z` lists the site parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaudinInstance {
    #[serde(rename = "N")]
    pub n_dim: usize,
    pub n: usize,
    #[serde(with = "crate::scalar::rational_strings")]
    pub h: Vec<Rational>,
    #[serde(with = "crate::scalar::rational_strings")]
    pub z: Vec<Rational>,
}

impl GaudinInstance {
    pub fn new(h: Vec<Rational>, z: Vec<Rational>) -> Result<Self> {
        let inst = GaudinInstance { n_dim: h.len(), n: z.len(), h, z };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_dim == 0 {
            return domain("N must be at least 1");
        }
        if self.h.len() != self.n_dim || self.z.len() != self.n {
            return domain(format!(
                "expected {} eigenvalues and {} sites, got {} and {}",
                self.n_dim,
                self.n,
                self.h.len(),
                self.z.len()
            ));
        }
        Ok(())
    }

    /// Site labels `1..=n`.
    pub fn labels(&self) -> Vec<usize> {
        (1..=self.n).collect()
    }

    /// `(u + z_1) ⋯ (u + z_n)`.
    pub fn site_polynomial(&self) -> Poly<Rational> {
        Poly::from_shifts(&self.z)
    }

    /// `Π_{l ∈ [n] ∖ K} (u + z_l)` for 1-based labels in `k`.
    pub fn complement_polynomial(&self, k: &[usize]) -> Poly<Rational> {
        Poly::from_shifts(self.z.iter().enumerate().filter(|(i, _)| !k.contains(&(i + 1))).map(|(_, z)| z))
    }

    /// Same sites with `h = 0`.
    pub fn with_zero_h(&self) -> Self {
        GaudinInstance { h: vec![Rational::from_integer(0.into()); self.n_dim], ..self.clone() }
    }
}
