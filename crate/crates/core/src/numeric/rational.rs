//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, `"p"`, a plain decimal such as `"-0.25"`, or either of the
/// last two with a decimal exponent (`"1e-6"`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let e: i32 = e.parse().map_err(|_| bad())?;
        if m.contains('/') || e.unsigned_abs() > 1000 {
            return Err(bad());
        }
        let scale = Rational::from_integer(BigInt::from(10u32).pow(e.unsigned_abs()));
        let m = parse_rational(m)?;
        return Ok(if e < 0 { m / scale } else { m * scale });
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Canonical text: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `x^e` for any integer exponent; `x` must be nonzero when `e < 0`.
pub fn powi(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), e.unsigned_abs() as usize)
    }
}

/// Integer value if `r` is integral and fits in `i64`.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Generalized binomial coefficient `binom(top, k)` via the falling factorial,
/// valid for negative `top`.
pub fn gen_binomial(top: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k as i64 {
        acc *= int(top - j);
        acc /= int(j + 1);
    }
    acc
}

/// Nearest rational with denominator at most `max_den`; ties go to the smaller denominator.
pub fn nearest_small_rational(x: f64, max_den: u32) -> (Rational, f64) {
    let mut best = (int(x.round() as i64), (x - x.round()).abs());
    for d in 2..=max_den as i64 {
        let p = (x * d as f64).round() as i64;
        if p.gcd(&d) != 1 {
            continue;
        }
        let dist = (x - p as f64 / d as f64).abs();
        if dist < best.1 {
            best = (rat(p, d), dist);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(parse_rational("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert!(parse_rational("1/2e3").is_err());
        assert!(parse_rational("1e").is_err());
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn negative_powers() {
        assert_eq!(powi(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(powi(&rat(2, 3), 0), int(1));
    }

    #[test]
    fn generalized_binomials() {
        // binom(-2, k) = (-1)^k (k+1)
        assert_eq!(gen_binomial(-2, 3), int(-4));
        assert_eq!(gen_binomial(0, 0), int(1));
        assert_eq!(gen_binomial(0, 2), int(0));
        assert_eq!(gen_binomial(5, 2), int(10));
    }

    #[test]
    fn small_rational_rounding() {
        assert_eq!(nearest_small_rational(2.4999, 4).0, rat(5, 2));
        assert_eq!(nearest_small_rational(12.9999999, 4).0, int(13));
        let (r, d) = nearest_small_rational(0.37, 4);
        assert_eq!(r, rat(1, 3));
        assert!(d < 0.04);
    }
}
