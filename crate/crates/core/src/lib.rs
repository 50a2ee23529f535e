//! Cycle statistics for free groups and regular graphs.
//!
//! Exact counting (cyclically reduced words, homology classes, conjugacy classes, zeta
//! functions) runs over big integers and rationals; asymptotic constants (variances,
//! perturbation coefficients, entropies) run in floating point. The dense containers are
//! generic over the scalar type; the aliases below fix the common instantiations.

pub mod arith;
pub mod chebyshev;
pub mod entropy;
pub mod enumeration;
pub mod error;
pub mod freegroup;
pub mod graph;
pub mod homodist;
pub mod laurent;
pub mod linalg;
pub mod linegraph;
pub mod matrix;
pub mod perturbation;
pub mod poly;
pub mod scalar;
pub mod walks;
pub mod walkstats;

pub use error::{Error, Result};
pub use graph::{char_poly, reversed_char_poly, trace_power, Connectivity, Graph};
pub use laurent::Laurent;
pub use linalg::{eigenvalues, spectral_radius, symmetric_eigen};
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::{Field, RealFloat, Ring};

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;

/// Exact integer matrix.
pub type BigMatrix = Matrix<BigInt>;
/// Exact rational matrix.
pub type RatMatrix = Matrix<BigRational>;
/// Double-precision matrix.
pub type FloatMatrix = Matrix<f64>;
/// Complex double-precision matrix.
pub type ComplexMatrix = Matrix<Complex64>;
/// Exact polynomial with rational coefficients.
pub type RationalPoly = Poly<BigRational>;
/// Exact polynomial with integer coefficients.
pub type IntPoly = Poly<BigInt>;
/// Exact multivariate Laurent polynomial with integer coefficients.
pub type LaurentPoly = Laurent<BigInt>;
/// Double-precision symmetric spectrum.
pub type Spectrum = linalg::Spectrum<f64>;
