//! Exact bidiagonal factorizations and total-positivity checks for
//! `S = [1 + x_i y_j]`, its Hadamard powers, and related structured matrices.

pub mod error;
pub mod factor;
pub mod factorizations;
pub mod generators;
pub mod grid;
pub mod matrix;
pub mod positivity;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use factor::{
    exact_product, verify_certificate, CertificateKind, Factor, FactorizationCertificate, Target,
    VerificationReport,
};
pub use grid::{Grid, GridOrdering, GridParams};
pub use matrix::{AnyMatrix, ExactMatrix, FloatMatrix, Matrix, MinorSpec, RadicalMatrix};
pub use positivity::{Mode, PositivityVerdict, Property};
pub use scalar::{FloatScalar, RadicalScalar, Rational};
