//! Exact verification engine for frame-presented manifolds with an almost
//! paracontact structure and a quarter-symmetric metric connection.

pub mod check;
pub mod connection;
pub mod curvature;
pub mod error;
pub mod fixtures;
pub mod frame;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod spec_file;
pub mod symmetry;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision exact rational, the scalar every public entry point
/// in the reporting layer uses.
pub type Rational = num_rational::BigRational;
