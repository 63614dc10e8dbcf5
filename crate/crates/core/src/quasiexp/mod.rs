//! Spaces of quasi-exponentials `⟨e^{h_1 u} p_1(u), …, e^{h_N u} p_N(u)⟩`:
//! Wronskians, Plücker coordinates, translation, Jacobi–Trudi identities,
//! the single-row basis, the differential operator with kernel `V`,
//! Grassmann duality, polynomial limits and the exponential shift matrix.
//!
//! All arithmetic is exact. Values at rational points are [`ExpSum`]s.

mod dual;
mod expsum;
mod function;
mod gseries;
mod identities;
mod limit;
mod plucker;
mod space;

pub use dual::dual_space;
pub use expsum::ExpSum;
pub use function::{parse_function, QuasiExp, TermDump};
pub use gseries::{
    basis_from_g, differential_operator, g_series, g_series_bordered, verify_differential_operator, GBasis,
};
pub use identities::{verify_dual_jacobi_trudi, verify_jacobi_trudi, verify_translation_identity};
pub use limit::{
    exp_of_generator, exp_shift_matrix, limit_errors, limit_family_report, poly_limit_family,
    sample_nonvanishing_index_sets, shift_minor_report,
};
pub use plucker::{minor_rows, PlueckerVector};
pub use space::{QuasiExpSpace, WronskianInfo};
