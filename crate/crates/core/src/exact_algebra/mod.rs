//! Polynomials, differential forms and exact linear algebra.

pub mod combination;
pub mod forms;
pub mod linalg;
pub mod poly;
pub mod sturm;
pub mod upoly;

pub use forms::{wedge, ExteriorDerivative, OneForm, TwoForm};
pub use linalg::{solve_linear, LinearSolution, Matrix, SparseSystem};
pub use poly::{Degree, Monomial, Poly};
pub use sturm::{sturm_sign_counts, SignCounts};
pub use upoly::UPoly;
