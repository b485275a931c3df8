//! Dense univariate polynomials in `λ` over an arbitrary coefficient ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use super::ring::{ExactDiv, Ring};
use crate::error::{arg_err, Result};

/// Polynomial with coefficients stored by ascending power, trailing zeros trimmed.
/// The zero polynomial has no coefficients and degree `None` (the `-inf` sentinel).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// `c·λ^k`
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The indeterminate `λ`.
    pub fn x() -> Self {
        Poly::monomial(C::one(), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `λ^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiplies by `λ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc * self.clone())
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Poly<C>) -> Result<(Poly<C>, Poly<C>)> {
        if !divisor.is_monic() {
            return arg_err("divisor must be monic");
        }
        let d = divisor.degree().unwrap_or(0);
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![C::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let lead = std::mem::replace(&mut rem[k], C::zero());
            if lead.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..d].iter().enumerate() {
                let v = rem[k - d + j].clone() - lead.clone() * dc.clone();
                rem[k - d + j] = v;
            }
            quot[k - d] = lead;
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Remainder of `self` modulo a monic `modulus` of degree at least one.
    pub fn mod_reduce(&self, modulus: &Poly<C>) -> Result<Poly<C>> {
        if modulus.degree().unwrap_or(0) == 0 {
            return arg_err("modulus must have degree >= 1");
        }
        Ok(self.div_rem_monic(modulus)?.1)
    }

    /// Formal derivative with respect to `λ`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let mut m = C::zero();
                for _ in 0..k {
                    m = m + c.clone();
                }
                m
            })
            .collect();
        Poly::new(coeffs)
    }
}

impl<C: ExactDiv> Poly<C> {
    /// Scales to a monic polynomial.
    pub fn monic(&self) -> Result<Self> {
        match self.leading() {
            None => arg_err("zero polynomial has no monic normalization"),
            Some(lc) => Ok(Poly::new(self.coeffs.iter().map(|c| c.exact_div(lc)).collect())),
        }
    }
}

impl<C: Ring> Zero for Poly<C> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Ring> One for Poly<C> {
    fn one() -> Self {
        Poly::constant(C::one())
    }
}

impl<C: Ring> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Ring> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<C: Ring> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Ring> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<C: Ring> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Ring> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = std::mem::replace(&mut out[i + j], C::zero());
                out[i + j] = v + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<C: Ring> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<C: fmt::Debug> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs(), "λ", true)
    }
}

/// Writes `Σ c_k x^k` with the highest power first (`descending`) or lowest first.
pub(crate) fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[Rational], var: &str, descending: bool) -> fmt::Result {
    let mut order: Vec<usize> = (0..coeffs.len()).filter(|&k| !coeffs[k].is_zero()).collect();
    if descending {
        order.reverse();
    }
    if order.is_empty() {
        return write!(f, "0");
    }
    for (pos, &k) in order.iter().enumerate() {
        let c = &coeffs[k];
        let negative = *c < Rational::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        match (pos, negative) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let show_coeff = k == 0 || !mag.is_one();
        if show_coeff {
            write!(f, "{}", format_rational(&mag))?;
        }
        match k {
            0 => {}
            1 => write!(f, "{var}")?,
            _ => write!(f, "{var}^{k}")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::int;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[]).is_zero());
    }

    #[test]
    fn reduce_lambda_squared() {
        // λ² mod (λ² − 4λ + 2) = 4λ − 2
        let f = p(&[2, -4, 1]);
        assert_eq!(p(&[0, 0, 1]).mod_reduce(&f).unwrap(), p(&[-2, 4]));
        assert_eq!(p(&[3, 1]).mod_reduce(&f).unwrap(), p(&[3, 1]));
        assert!(f.mod_reduce(&f).unwrap().is_zero());
    }

    #[test]
    fn non_monic_modulus_rejected() {
        assert!(p(&[1, 1]).mod_reduce(&p(&[1, 2])).is_err());
    }

    #[test]
    fn display_descending() {
        assert_eq!(p(&[2, -4, 1]).to_string(), "λ^2 - 4λ + 2");
        assert_eq!(p(&[-1]).to_string(), "-1");
    }

    #[test]
    fn derivative_and_eval() {
        let f = p(&[2, -4, 1]);
        assert_eq!(f.derivative(), p(&[-4, 2]));
        assert_eq!(f.eval(&int(3)), int(-1));
    }
}
