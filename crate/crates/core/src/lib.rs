//! Exact verification toolkit for higher Gaudin Hamiltonians `T_λ(u)`, the
//! group-algebra operators `β_λ(u)`, Wronskians and Plücker coordinates of
//! spaces of quasi-exponentials.
//!
//! All identity checks run over exact rationals; only the simultaneous
//! eigensolve and the reconstruction fits in [`spectral`] use floats.

#![allow(clippy::needless_range_loop)]

pub mod combinatorics;
pub mod error;
pub mod gaudin;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod quasiexp;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod suites;
pub mod symfunc;
pub mod tensor;

pub use error::{Error, Result};
pub use par::Execution;
pub use scalar::{Rational, Scalar};
