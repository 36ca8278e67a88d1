//! Exact arithmetic: rationals, Q(params), polynomials and rational functions.

pub mod frac;
pub mod gcd;
pub mod linalg;
pub mod multipoly;
pub mod poly;
pub mod resultant;
pub mod roots;
pub mod scalar;

pub use frac::Frac;
pub use multipoly::{exact_divides, multivariate_gcd, poly_divrem, Exponents, MultiPoly};
pub use poly::{rat, ratio, Monomial, Poly, Rational};
pub use scalar::{scalar_arith, ArithOp, RatFunc, Scalar};
