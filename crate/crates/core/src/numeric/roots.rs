//! Simultaneous root finding (Aberth–Ehrlich) at arbitrary precision.
//!
//! Starting points are placed on circles whose radii come from the upper
//! convex hull of `(k, log2|a_k|)`, so roots spread over many orders of
//! magnitude (as happens for `q`-deformed spectra) are found in few sweeps.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use super::bigfloat::BigFloat;
use super::poly::Poly;
use crate::error::{arg_err, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBig {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl ComplexBig {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        ComplexBig { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        ComplexBig { re, im: BigFloat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `log2|z|`, double precision.
    pub fn log2_abs(&self) -> f64 {
        let (a, b) = (self.re.log2_abs(), self.im.log2_abs());
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2()
    }

    fn div(&self, rhs: &ComplexBig) -> ComplexBig {
        let den = &(&rhs.re * &rhs.re) + &(&rhs.im * &rhs.im);
        let re = &(&self.re * &rhs.re) + &(&self.im * &rhs.im);
        let im = &(&self.im * &rhs.re) - &(&self.re * &rhs.im);
        ComplexBig::new(&re / &den, &im / &den)
    }

    fn recip(&self) -> ComplexBig {
        let den = &(&self.re * &self.re) + &(&self.im * &self.im);
        ComplexBig::new(&self.re / &den, &(-self.im.clone()) / &den)
    }
}

impl Add for &ComplexBig {
    type Output = ComplexBig;
    fn add(self, rhs: &ComplexBig) -> ComplexBig {
        ComplexBig::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ComplexBig {
    type Output = ComplexBig;
    fn sub(self, rhs: &ComplexBig) -> ComplexBig {
        ComplexBig::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ComplexBig {
    type Output = ComplexBig;
    fn mul(self, rhs: &ComplexBig) -> ComplexBig {
        ComplexBig::new(&(&self.re * &rhs.re) - &(&self.im * &rhs.im), &(&self.re * &rhs.im) + &(&self.im * &rhs.re))
    }
}

/// `(p(z), p'(z))` by Horner's rule; coefficients ascending.
fn eval_with_derivative(coeffs: &[BigFloat], z: &ComplexBig) -> (ComplexBig, ComplexBig) {
    let mut p = ComplexBig::real(coeffs.last().cloned().unwrap_or_else(BigFloat::zero));
    let mut dp = ComplexBig::real(BigFloat::zero());
    for c in coeffs.iter().rev().skip(1) {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + &ComplexBig::real(c.clone());
    }
    (p, dp)
}

fn initial_guesses(coeffs: &[BigFloat], precision: usize) -> Vec<ComplexBig> {
    let n = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs.iter().map(BigFloat::log2_abs).collect();
    // Upper convex hull over the points with finite log.
    let mut hull: Vec<usize> = Vec::new();
    for k in (0..=n).filter(|&k| logs[k].is_finite()) {
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (logs[j] - logs[i]) * (k - i) as f64 - (logs[k] - logs[i]) * (j - i) as f64;
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(n);
    let tau = std::f64::consts::TAU;
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let count = j - i;
        let log_r = (logs[i] - logs[j]) / count as f64;
        let r = log_r.exp2();
        for m in 0..count {
            let angle = tau * m as f64 / count as f64 + tau * i as f64 / n as f64 + 0.4;
            let re = BigFloat::from_f64(r * angle.cos(), precision);
            let im = BigFloat::from_f64(r * angle.sin(), precision);
            out.push(ComplexBig::new(re, im));
        }
    }
    out
}

/// All complex roots of `f` at `precision` bits, sorted by descending real part.
///
/// Iteration stops once every correction is below `2^-(precision-8)` relative
/// to its root, or has stalled below `2^-(precision/2)`.
pub fn poly_roots(f: &Poly<BigFloat>, precision: usize) -> Result<Vec<ComplexBig>> {
    let degree = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return arg_err("root finding needs a polynomial of degree >= 1"),
    };
    let lead = f.leading().expect("nonzero").with_precision(precision);
    let mut coeffs: Vec<BigFloat> = f.coeffs().iter().map(|c| &c.with_precision(precision) / &lead).collect();

    let zero_roots = coeffs.iter().take_while(|c| c.is_zero()).count();
    coeffs.drain(..zero_roots);
    let mut roots = vec![ComplexBig::real(BigFloat::from_i64(0, precision)); zero_roots];
    let n = degree - zero_roots;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(ComplexBig::real(-coeffs[0].clone()));
        return Ok(sort_roots(roots));
    }

    let mut z = initial_guesses(&coeffs, precision);
    let mut done = vec![false; n];
    let mut last_step = vec![f64::INFINITY; n];
    let strict = precision as f64 - 8.0;
    let loose = precision as f64 / 2.0;
    let max_sweeps = 400 + 20 * n;
    let one = ComplexBig::real(BigFloat::from_i64(1, precision));

    for _ in 0..max_sweeps {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp) = eval_with_derivative(&coeffs, &z[k]);
            if p.is_zero() {
                done[k] = true;
                continue;
            }
            let ratio = p.div(&dp);
            let mut sum = ComplexBig::real(BigFloat::zero());
            for j in (0..n).filter(|&j| j != k) {
                sum = &sum + &(&z[k] - &z[j]).recip();
            }
            let w = ratio.div(&(&one - &(&ratio * &sum)));
            let step = w.log2_abs() - z[k].log2_abs();
            z[k] = &z[k] - &w;
            if step < -strict || (step < -loose && step > last_step[k] - 1.0) {
                done[k] = true;
            }
            last_step[k] = step;
        }
        if done.iter().all(|&d| d) {
            roots.extend(z);
            return Ok(sort_roots(roots));
        }
    }
    let worst = z.iter().map(|zk| eval_with_derivative(&coeffs, zk).0.log2_abs()).fold(f64::NEG_INFINITY, f64::max);
    Err(Error::NoConvergence { iterations: max_sweeps, log2_residual: worst })
}

fn sort_roots(mut roots: Vec<ComplexBig>) -> Vec<ComplexBig> {
    roots.sort_by(|a, b| b.re.partial_cmp(&a.re).expect("finite roots"));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat, Rational};

    fn to_big(coeffs: &[Rational], prec: usize) -> Poly<BigFloat> {
        Poly::new(coeffs.iter().map(|c| BigFloat::from_rational(c, prec)).collect())
    }

    #[test]
    fn factorable_quadratic() {
        let f = to_big(&[int(2), int(-3), int(1)], 128);
        let r = poly_roots(&f, 128).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].re.to_f64() - 2.0).abs() < 1e-30);
        assert!((r[1].re.to_f64() - 1.0).abs() < 1e-30);
        assert!(r[0].im.log2_abs() < -60.0);
    }

    #[test]
    fn quadratic_formula_oracle() {
        // λ² − 4λ + 2 has roots 2 ± √2; check (r − 2)² = 2 at full precision.
        let prec = 256;
        let f = to_big(&[int(2), int(-4), int(1)], prec);
        let r = poly_roots(&f, prec).unwrap();
        let two = BigFloat::from_i64(2, prec);
        for (root, sign) in r.iter().zip([1.0, -1.0]) {
            let d = &root.re - &two;
            assert_eq!(d.is_positive(), sign > 0.0);
            let err = &(&d * &d) - &two;
            assert!(err.log2_abs() < -(prec as f64) / 2.0);
        }
    }

    #[test]
    fn widely_spread_magnitudes() {
        // (λ − 3)(λ − 2·10⁻⁹)(λ − 10⁻⁹)
        let e = rat(1, 1_000_000_000);
        let roots = [int(3), &e * int(2), e.clone()];
        let mut p = Poly::<Rational>::constant(int(1));
        for r in &roots {
            p = &p * &Poly::new(vec![-r.clone(), int(1)]);
        }
        let got = poly_roots(&to_big(p.coeffs(), 200), 200).unwrap();
        for (g, r) in got.iter().zip(&roots) {
            let rb = BigFloat::from_rational(r, 200);
            let rel = (&(&g.re - &rb) / &rb).log2_abs();
            assert!(rel < -100.0, "relative error 2^{rel}");
        }
    }

    fn assert_reconstructs(c: &[Rational], prec: usize) {
        let roots = poly_roots(&to_big(c, prec), prec).unwrap();
        let mut prod = vec![ComplexBig::real(BigFloat::from_i64(1, prec))];
        for r in &roots {
            let mut next = vec![ComplexBig::real(BigFloat::zero()); prod.len() + 1];
            for (k, pk) in prod.iter().enumerate() {
                next[k + 1] = &next[k + 1] + pk;
                next[k] = &next[k] - &(pk * r);
            }
            prod = next;
        }
        let bound = -(prec as f64) / 2.0;
        for (k, ck) in c.iter().enumerate() {
            let scale = BigFloat::from_rational(ck, prec).log2_abs().max(0.0);
            let diff = &prod[k].re - &BigFloat::from_rational(ck, prec);
            assert!(diff.log2_abs() - scale < bound, "coefficient {k}: {c:?}");
            assert!(prod[k].im.log2_abs() - scale < bound, "coefficient {k}: {c:?}");
        }
    }

    #[test]
    fn reconstructs_coefficients() {
        assert_reconstructs(&[int(-7), rat(1, 2), int(3), int(-2), int(1)], 192);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
        #[test]
        fn random_polynomials_reconstruct(
            c in proptest::collection::vec((-20i64..=20, 1i64..=4), 1..=6),
        ) {
            let mut c: Vec<Rational> = c.into_iter().map(|(p, q)| rat(p, q)).collect();
            c.push(int(1));
            assert_reconstructs(&c, 192);
        }
    }

    #[test]
    fn zero_roots_and_degree_errors() {
        let f = to_big(&[int(0), int(0), int(-1), int(1)], 64);
        let r = poly_roots(&f, 64).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().filter(|z| z.is_zero()).count() == 2);
        assert!(poly_roots(&to_big(&[int(5)], 64), 64).is_err());
    }
}
