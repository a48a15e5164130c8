//! Exact algebra for Hamiltonian pencils built from real line arrangements.
//!
//! The layers, bottom up:
//!
//! * [`exact_algebra`]: sparse bivariate and dense univariate polynomials,
//!   polynomial 1- and 2-forms, exact linear solving and Sturm counts.
//! * [`milnor`]: Gröbner bases of the Jacobian ideal, the Milnor algebra and
//!   the multiplication-by-`f` operator with its spectral data.
//! * [`arrangement`]: vertices, bounded faces and incidences of a line
//!   arrangement in general position.
//! * [`lefschetz`]: intersection form of vanishing cycles, Picard-Lefschetz
//!   monodromy and orbit spans.
//! * [`petrov`]: relative exactness, the Gauss-Manin connection and kernels
//!   of its powers.
//! * [`melnikov`]: logarithmic decompositions and the order-`k..2k`
//!   Melnikov recursion for deformations.
//!
//! The first two layers are generic over [`Scalar`]; the rest work over
//! [`Rational`].

pub mod arrangement;
pub mod error;
pub mod exact_algebra;
pub mod json;
pub mod lefschetz;
pub mod melnikov;
pub mod milnor;
pub mod petrov;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{parse_rational, q, Scalar};

/// Arbitrary-precision rationals, the ground field of the analysis pipeline.
pub type Rational = num_rational::BigRational;

pub type RPoly = exact_algebra::Poly<Rational>;
pub type RUPoly = exact_algebra::UPoly<Rational>;
pub type ROneForm = exact_algebra::OneForm<Rational>;
pub type RTwoForm = exact_algebra::TwoForm<Rational>;
pub type RMatrix = exact_algebra::Matrix<Rational>;
