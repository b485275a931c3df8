//! Polynomials in the deformation parameter `q`, used for the `q`-embedding of
//! ultradiscrete states.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{write_terms, Poly};
use super::rational::Rational;
use super::ring::ExactDiv;

/// `q`-adic valuation: index of the lowest nonzero coefficient, `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(usize),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Self) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

/// Dense polynomial in `q` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPolynomial(Poly<Rational>);

impl QPolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        QPolynomial(Poly::new(coeffs))
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        QPolynomial::new(coeffs.iter().map(|&c| super::rational::int(c)).collect())
    }

    /// `c·q^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        QPolynomial(Poly::monomial(c, k))
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.0.coeffs()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.coeff(k)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs().iter().position(|c| !c.is_zero()) {
            Some(k) => Valuation::Finite(k),
            None => Valuation::Infinite,
        }
    }

    /// Coefficient at the valuation (the leading `q`-order term).
    pub fn lowest_coeff(&self) -> Option<&Rational> {
        self.coeffs().iter().find(|c| !c.is_zero())
    }

    pub fn eval(&self, q: &Rational) -> Rational {
        self.0.eval(q)
    }

    pub fn as_poly(&self) -> &Poly<Rational> {
        &self.0
    }
}

impl From<Poly<Rational>> for QPolynomial {
    fn from(p: Poly<Rational>) -> Self {
        QPolynomial(p)
    }
}

impl Zero for QPolynomial {
    fn zero() -> Self {
        QPolynomial(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for QPolynomial {
    fn one() -> Self {
        QPolynomial(Poly::one())
    }
}

impl Add for QPolynomial {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        QPolynomial(&self.0 + &rhs.0)
    }
}

impl Sub for QPolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        QPolynomial(&self.0 - &rhs.0)
    }
}

impl Mul for QPolynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        QPolynomial(&self.0 * &rhs.0)
    }
}

impl Neg for QPolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        QPolynomial(-self.0)
    }
}

impl ExactDiv for QPolynomial {
    /// Long division over `ℚ`; the caller guarantees divisibility.
    fn exact_div(&self, divisor: &Self) -> Self {
        let lc = divisor.0.leading().expect("exact division by the zero q-polynomial").clone();
        let monic = divisor.0.scale(&lc.recip());
        let (quot, rem) = self.0.div_rem_monic(&monic).expect("normalized divisor is monic");
        debug_assert!(rem.is_zero(), "inexact q-polynomial division");
        QPolynomial(quot.scale(&lc.recip()))
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs(), "q", false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qpoly_strategy() -> impl Strategy<Value = QPolynomial> {
        (0usize..4, prop::collection::vec(-5i64..=5, 1..5)).prop_map(|(shift, mut cs)| {
            if cs.iter().all(|&c| c == 0) {
                cs[0] = 1;
            }
            let mut v = vec![0; shift];
            v.extend(cs);
            QPolynomial::from_ints(&v)
        })
    }

    #[test]
    fn zero_has_infinite_valuation() {
        assert_eq!(QPolynomial::zero().valuation(), Valuation::Infinite);
        assert_eq!(QPolynomial::from_ints(&[0, 0, 3]).valuation(), Valuation::Finite(2));
    }

    #[test]
    fn display_ascending() {
        assert_eq!(QPolynomial::from_ints(&[10, 13, 3, 0, 1]).to_string(), "10 + 13q + 3q^2 + q^4");
    }

    #[test]
    fn exact_division() {
        let a = QPolynomial::from_ints(&[1, 1]);
        let b = QPolynomial::from_ints(&[0, 2, -1]);
        assert_eq!((a.clone() * b.clone()).exact_div(&b), a);
    }

    proptest! {
        #[test]
        fn valuation_is_additive(p in qpoly_strategy(), q in qpoly_strategy()) {
            prop_assert_eq!((p.clone() * q.clone()).valuation(), p.valuation() + q.valuation());
        }
    }
}
