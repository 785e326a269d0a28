//! Weighted Hilbert spaces of analytic functions on the unit disk, represented
//! through truncated Taylor series: norms and kernels, matrix compressions of
//! multiplication and composition operators, m-isometry defects, Blaschke
//! products and Pick-type positivity tests.

// `!(x < 1.0)` is used on purpose so NaN lands on the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod pick;
pub mod probes;
pub mod report;
pub mod series;
pub mod spaces;
pub mod suite;

pub use blaschke::{BlaschkeProduct, MobiusMap};
pub use error::{Error, Result};
pub use report::{OutputFormat, Provenance, Status, VerificationReport};
pub use series::PowerSeries;
pub use spaces::Space;
