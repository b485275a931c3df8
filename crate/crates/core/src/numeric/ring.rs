use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::Rational;

/// Commutative ring with unit, the coefficient domain for [`Poly`](super::Poly)
/// and for determinants.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + Debug + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// A ring with exact division by nonzero divisors of a known product,
/// which is all fraction-free elimination needs.
pub trait ExactDiv: Ring {
    fn exact_div(&self, divisor: &Self) -> Self;
}

impl ExactDiv for Rational {
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

/// Ring in which every nonzero element is invertible.
pub trait Field: ExactDiv + Div<Output = Self> {}

impl Field for Rational {}

/// Subtraction-free arithmetic: what the `(a, b)` evolution actually uses.
/// Implemented by fields and by log-domain number systems.
pub trait Semifield: Clone + Debug + Zero + One + Add<Output = Self> + Mul<Output = Self> + Div<Output = Self> {}

impl<T> Semifield for T where T: Clone + Debug + Zero + One + Add<Output = T> + Mul<Output = T> + Div<Output = T> {}
