//! Two-level orthogonal arrays with arbitrary replication, generated as the
//! minimal Hilbert basis of the lattice points of the cone
//! `{R >= 0 : M^t R = 0}`, where `M` is the model matrix of the
//! interactions of order `1..=m`.
//!
//! Module map:
//!
//! * [`design`]: points of `{-1,+1}^n`, exponent vectors, monomials.
//! * [`fraction`]: replicate vectors and exact counting coefficients.
//! * [`model`]: the model matrix and its self-checks.
//! * [`hilbert`]: cone systems, basis solvers, brute-force oracle,
//!   membership and decomposition.
//! * [`analysis`]: the Walsh–Hadamard transform, orthogonal-array tests,
//!   classification, complements and symmetries.
//! * [`indicator`]: direct enumeration of 0/1 orthogonal arrays.
//! * [`io`]: text formats for matrices, bases and summaries.

pub mod analysis;
pub mod design;
pub mod error;
pub mod fraction;
pub mod hilbert;
pub mod indicator;
pub mod io;
pub mod matrix;
pub mod model;

pub use design::{
    enumerate_exponents, enumerate_points, eval_monomial, DesignPoint, ExponentVector,
};
pub use error::{Error, Result};
pub use fraction::{CountingCoefficients, Dyadic, ReplicateVector};
pub use hilbert::{hilbert_basis, Algorithm, Budget, ConeSystem, HilbertBasis};
pub use matrix::IntMatrix;
pub use model::{build_model_matrix, verify_matrix, ModelMatrix};
