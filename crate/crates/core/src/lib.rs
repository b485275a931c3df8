//! Exact, big-float and tropical machinery for the discrete Toda lattice with
//! fixed boundary: the `(a, b)` evolution and its Lax pair, the spectral inverse
//! problem and Casorati tau functions, the degenerate (dual Grothendieck) tau,
//! and the ultradiscrete limit with its tropical permanent solution and
//! kicker/ball cellular automaton.

pub mod checks;
pub mod error;
pub mod grothendieck;
pub mod io;
pub mod lax;
pub mod numeric;
pub mod sample;
pub mod scatter;
pub mod toda;
pub mod tropical;
pub mod ultradiscrete;

pub use error::{Error, Result};
pub use lax::{QuotientElement, SpectralData};
pub use numeric::{BigFloat, Poly, QPolynomial, Rational};
pub use toda::TodaState;
