//! Symmetry analysis for small non-Hermitian matrix Hamiltonians.
//!
//! The crate classifies PT, anti-PT and C symmetries of dense complex
//! matrices, applies similarity transforms, and sweeps parameterized
//! families to trace eigenvalue branches, locate exceptional points and
//! measure how far the spectrum is from mirror symmetric.
//!
//! Module map:
//! - [`numerics`]: complex scalars and small dense matrices
//! - [`eigen`]: closed-form 2x2 and Hessenberg-QR eigenvalues
//! - [`symmetry`]: P, T, PT and C operators and the checks on them
//! - [`transform`]: built-in two-level families and `S⁻¹HS`
//! - [`template`]: expression language and `.ham` template files
//! - [`sweep`]: branch-tracked parameter sweeps and exceptional points
//! - [`report`]: CSV, JSON and SVG output
//! - [`cli`]: the `ptsym` command line

pub mod cli;
pub mod eigen;
pub mod error;
pub mod numerics;
pub mod report;
pub mod sweep;
pub mod symmetry;
pub mod template;
pub mod transform;

pub use error::{Error, Result};
pub use numerics::{ComplexScalar, DenseMatrix};
