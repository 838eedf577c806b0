//! Commutative rings graded by ordered abelian groups: arithmetic,
//! certificate-producing decision procedures and a brute-force finite-ring
//! oracle to check them against.

pub mod algebra;
pub mod decide;
pub mod dsl;
pub mod error;
pub mod gallery;
pub mod grading;
pub mod oracle;
pub mod scalars;
pub mod spectra;

pub use algebra::{Element, Monomial, Ring, RingPresentation};
pub use error::{Error, Result};
pub use grading::{Grade, GradeMorphism, GradingGroup};
pub use scalars::{BaseRing, Scalar};
