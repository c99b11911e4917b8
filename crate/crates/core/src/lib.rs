//! Critical points of master functions for the inhomogeneous sl2 Gaudin
//! model, the representation-theoretic counts that enumerate them, and the
//! associated second-order Fuchsian equations with only polynomial
//! solutions.
//!
//! The crate is organized around one generic scalar abstraction
//! ([`scalar::Scalar`]): exact arbitrary-precision rationals drive the
//! representation theory, the Gaudin Hamiltonians, and certified equation
//! checks; complex floats drive the seed-and-track solver and the
//! eigenvector verification. Most algebraic code paths (polynomials,
//! matrices, tensor coefficients, equation assembly) are written once and
//! instantiated at both scalars.

pub mod error;
pub mod scalar;

pub mod linalg;
pub mod poly;

pub mod bethe;
pub mod fuchsian;
pub mod gaudin;
pub mod master;
pub mod rep;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::{Complex64, Rational, Scalar};

/// Exact-mode polynomial.
pub type PolyQ = poly::Polynomial<Rational>;
/// Float-mode polynomial.
pub type PolyC = poly::Polynomial<Complex64>;
/// Exact-mode dense matrix.
pub type MatQ = linalg::Matrix<Rational>;
/// Float-mode dense matrix.
pub type MatC = linalg::Matrix<Complex64>;
/// Exact-mode tensor vector.
pub type TensorQ = rep::TensorVector<Rational>;
/// Float-mode tensor vector.
pub type TensorC = rep::TensorVector<Complex64>;
