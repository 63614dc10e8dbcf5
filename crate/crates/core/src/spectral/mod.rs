//! Joint eigenspaces of the commuting family `T_λ(t)`, exact PSD/PD
//! certificates, and the universality and positivity pipelines.
//!
//! Operators are always built exactly; only the eigensolve, the eigenvalue
//! interpolation and the reconstruction fits run in `f64`.

mod eigen;
mod psd;
mod reconstruct;

pub use eigen::{
    build_family, eigenspaces_for_instance, eigenvalue_polynomial, simultaneous_eigenspaces, Eigenspace,
    EigenspaceDecomposition,
};
pub use psd::{certify_psd_exact, matrix_hash, psd_hypotheses, verify_psd_theorem, PsdCertificate, Verdict};
pub use reconstruct::{
    default_truncation, needed_partitions, reconstruct_space, verify_positivity, verify_universal_coordinates,
    Reconstruction, SpectralRun, UniversalRun,
};

use serde::{Deserialize, Serialize};

/// Numerical tolerances for the float stages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative eigenvalue gap below which eigenvectors share a cluster.
    pub cluster: f64,
    /// Relative residual for eigenvalue and Rayleigh-quotient checks.
    pub eigenvalue: f64,
    /// Relative residual for the reconstruction checks.
    pub reconstruction: f64,
    /// Allowed wrong-sign mass in a normalized Plücker vector.
    pub sign: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { cluster: 1e-7, eigenvalue: 1e-8, reconstruction: 1e-6, sign: 1e-8 }
    }
}
