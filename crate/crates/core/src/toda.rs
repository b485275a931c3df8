//! The discrete Toda lattice in the `(a, b)` variables with fixed boundary
//! `a_0 = a_{N+1} = 1`, `b_0 = b_N = 0`.

use num_traits::{One, Zero};

use crate::error::{arg_err, Error, Result};
use crate::numeric::{Rational, Ring, Semifield};

/// `a_1..a_N` and `b_1..b_{N-1}`; the boundary values are implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct TodaState<C> {
    a: Vec<C>,
    b: Vec<C>,
}

impl<C: Clone> TodaState<C> {
    pub fn new(a: Vec<C>, b: Vec<C>) -> Result<Self> {
        if a.is_empty() {
            return arg_err("a Toda state needs N >= 1");
        }
        if b.len() + 1 != a.len() {
            return arg_err(format!("expected {} b values for N = {}, got {}", a.len() - 1, a.len(), b.len()));
        }
        Ok(TodaState { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[C] {
        &self.a
    }

    pub fn b(&self) -> &[C] {
        &self.b
    }

    pub fn map<D: Clone>(&self, f: impl Fn(&C) -> D) -> TodaState<D> {
        TodaState { a: self.a.iter().map(&f).collect(), b: self.b.iter().map(&f).collect() }
    }
}

impl<C: Clone + Zero + One> TodaState<C> {
    /// `a_n` for `0 <= n <= N+1`, boundary included.
    pub fn a_ext(&self, n: usize) -> C {
        if n == 0 || n == self.n() + 1 {
            C::one()
        } else {
            self.a[n - 1].clone()
        }
    }

    /// `b_n` for `0 <= n <= N`, boundary included.
    pub fn b_ext(&self, n: usize) -> C {
        if n == 0 || n == self.n() {
            C::zero()
        } else {
            self.b[n - 1].clone()
        }
    }
}

impl TodaState<Rational> {
    pub fn is_positive(&self) -> bool {
        let pos = |x: &Rational| *x > Rational::zero();
        self.a.iter().all(pos) && self.b.iter().all(pos)
    }
}

/// One time step in subtraction-free form:
/// `a_{n+1}' = r_n a_n`, `b_n' = r_n b_n` with `r_n = (a_{n+1}+b_{n+1})/(a_n+b_n)`.
///
/// Generic over semifields so it also runs in the log domain.
pub fn step<C: Semifield>(s: &TodaState<C>) -> Result<TodaState<C>> {
    let n = s.n();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n - 1);
    for k in 0..n {
        let den = s.a_ext(k) + s.b_ext(k);
        if den.is_zero() {
            return Err(Error::ZeroDenominator { site: k });
        }
        let r = (s.a_ext(k + 1) + s.b_ext(k + 1)) / den;
        a.push(r.clone() * s.a_ext(k));
        if k >= 1 {
            b.push(r * s.b_ext(k));
        }
    }
    Ok(TodaState { a, b })
}

/// `steps + 1` states starting with `s`.
pub fn trajectory<C: Semifield>(s: &TodaState<C>, steps: usize) -> Result<Vec<TodaState<C>>> {
    let mut out = vec![s.clone()];
    for _ in 0..steps {
        let next = step(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Residuals of the local form
/// `a_n' + b_{n-1}' − a_n − b_n` (n = 1..N) and `a_{n+1}' b_n − a_n b_n'` (n = 1..N−1).
pub fn local_conservation_residuals<C: Ring>(s: &TodaState<C>, next: &TodaState<C>) -> Result<(Vec<C>, Vec<C>)> {
    if s.n() != next.n() {
        return arg_err(format!("state sizes differ: {} vs {}", s.n(), next.n()));
    }
    let n = s.n();
    let additive = (1..=n).map(|k| next.a_ext(k) + next.b_ext(k - 1) - s.a_ext(k) - s.b_ext(k)).collect();
    let multiplicative = (1..n).map(|k| next.a_ext(k + 1) * s.b_ext(k) - s.a_ext(k) * next.b_ext(k)).collect();
    Ok((additive, multiplicative))
}

fn check_delta(delta: &Rational) -> Result<()> {
    if *delta <= Rational::zero() || *delta >= Rational::one() {
        return arg_err(format!("delta must lie in (0, 1), got {delta}"));
    }
    Ok(())
}

/// `u_n = ((1 − δ²)/δ²) b_n / a_n` for n = 1..N−1.
pub fn u_from_ab(s: &TodaState<Rational>, delta: &Rational) -> Result<Vec<Rational>> {
    check_delta(delta)?;
    let d2 = delta * delta;
    let pre = (Rational::one() - &d2) / &d2;
    s.b.iter()
        .zip(&s.a)
        .enumerate()
        .map(
            |(k, (b, a))| {
                if a.is_zero() {
                    Err(Error::Singular(format!("a_{} = 0", k + 1)))
                } else {
                    Ok(&pre * b / a)
                }
            },
        )
        .collect()
}

/// Cross-multiplied residual of Hirota's original form at the middle row:
/// `u^{t-1} u^{t+1} g(u_n)² − (u_n)² g(u_{n-1}) g(u_{n+1})`, `g(x) = 1 − δ² + δ²x`,
/// with `u_0 = u_N = 0`.
pub fn original_form_residual(rows: [&[Rational]; 3], delta: &Rational) -> Result<Vec<Rational>> {
    check_delta(delta)?;
    let m = rows[1].len();
    if rows.iter().any(|r| r.len() != m) {
        return arg_err("u rows must have equal length");
    }
    let d2 = delta * delta;
    let g = |x: &Rational| Rational::one() - &d2 + &d2 * x;
    let zero = Rational::zero();
    let u = |k: isize| -> &Rational {
        if k < 0 || k as usize >= m {
            &zero
        } else {
            &rows[1][k as usize]
        }
    };
    let mut out = Vec::with_capacity(m);
    for (k, (r0, r2)) in rows[0].iter().zip(rows[2]).enumerate() {
        let ki = k as isize;
        let (gl, gc, gr) = (g(u(ki - 1)), g(u(ki)), g(u(ki + 1)));
        if gl.is_zero() || gc.is_zero() || gr.is_zero() {
            return Err(Error::Singular(format!("1 - δ² + δ²u vanishes near site {}", k + 1)));
        }
        let lhs = r0 * r2 * &gc * &gc;
        let rhs = u(ki) * u(ki) * gl * gr;
        out.push(lhs - rhs);
    }
    Ok(out)
}
