//! Exact scalars, polynomials, determinants and big-float root finding.

pub mod bigfloat;
pub mod det;
pub mod poly;
pub mod qpoly;
pub mod rational;
pub mod ring;
pub mod roots;

pub use bigfloat::{BigFloat, DEFAULT_PRECISION};
pub use det::{cofactor_det, exact_det, tridiag_det};
pub use poly::Poly;
pub use qpoly::{QPolynomial, Valuation};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use ring::{ExactDiv, Field, Ring, Semifield};
pub use roots::{poly_roots, ComplexBig};
