//! The ultradiscrete Toda system in the `(A, B)` and `U` variables, its soliton
//! solutions, the kicker/ball automaton and text rendering.

use std::ops::{Add, Div, Mul};

use num_traits::{One, Signed, Zero};

use crate::error::{arg_err, Error, Result};
use crate::numeric::{int, Rational};
use crate::tropical::Ext;

/// `A_1..A_N` and `B_1..B_{N-1}` with `A_0 = A_{N+1} = 0`, `B_0 = B_N = +∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct UltraState {
    a: Vec<Ext>,
    b: Vec<Ext>,
}

impl UltraState {
    pub fn new(a: Vec<Ext>, b: Vec<Ext>) -> Result<Self> {
        if a.is_empty() {
            return arg_err("an ultradiscrete state needs N >= 1");
        }
        if b.len() + 1 != a.len() {
            return arg_err(format!("expected {} B values for N = {}, got {}", a.len() - 1, a.len(), b.len()));
        }
        if a.iter().chain(&b).any(|v| *v == Ext::NegInf) {
            return arg_err("A and B take values in Q or +inf");
        }
        Ok(UltraState { a, b })
    }

    pub fn from_ints(a: &[i64], b: &[i64]) -> Result<Self> {
        UltraState::new(a.iter().map(|&v| Ext::from_i64(v)).collect(), b.iter().map(|&v| Ext::from_i64(v)).collect())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Ext] {
        &self.a
    }

    pub fn b(&self) -> &[Ext] {
        &self.b
    }

    pub fn a_ext(&self, n: usize) -> Ext {
        if n == 0 || n == self.n() + 1 {
            Ext::from_i64(0)
        } else {
            self.a[n - 1].clone()
        }
    }

    pub fn b_ext(&self, n: usize) -> Ext {
        if n == 0 || n == self.n() {
            Ext::PosInf
        } else {
            self.b[n - 1].clone()
        }
    }

    fn min_at(&self, n: usize) -> Ext {
        self.a_ext(n).min(self.b_ext(n))
    }
}

/// `A_{n+1}' = min[A_{n+1}, B_{n+1}] − min[A_n, B_n] + A_n`,
/// `B_n' = min[A_{n+1}, B_{n+1}] − min[A_n, B_n] + B_n`.
pub fn ud_step(s: &UltraState) -> Result<UltraState> {
    let n = s.n();
    let mins: Vec<Ext> = (0..=n).map(|k| s.min_at(k)).collect();
    if let Some(k) = mins.iter().position(|m| *m == Ext::PosInf) {
        return Err(Error::MalformedState { site: k });
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n - 1);
    for k in 0..n {
        let d = mins[k + 1].sub(&mins[k]).map_err(|_| Error::MalformedState { site: k })?;
        a.push(d.add(&s.a_ext(k)).map_err(|_| Error::MalformedState { site: k })?);
        if k >= 1 {
            b.push(d.add(&s.b_ext(k)).map_err(|_| Error::MalformedState { site: k })?);
        }
    }
    UltraState::new(a, b)
}

pub fn ud_trajectory(s: &UltraState, steps: usize) -> Result<Vec<UltraState>> {
    let mut out = vec![s.clone()];
    for _ in 0..steps {
        let next = ud_step(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// `A_{n+1}' − A_n − (B_n' − B_n)` for n = 1..N−1.
pub fn ud_conservation_residuals(s: &UltraState, next: &UltraState) -> Result<Vec<Ext>> {
    if s.n() != next.n() {
        return arg_err("state sizes differ");
    }
    (1..s.n())
        .map(|k| {
            let lhs = next.a_ext(k + 1).sub(&s.a_ext(k))?;
            let rhs = next.b_ext(k).sub(&s.b_ext(k))?;
            lhs.sub(&rhs)
        })
        .collect()
}

/// `U_n = A_n − B_n + L` for n = 1..N−1.
pub fn u_from_ab(s: &UltraState, l: &Rational) -> Result<Vec<Ext>> {
    let l = Ext::Finite(l.clone());
    (1..s.n())
        .map(|k| s.a_ext(k).sub(&s.b_ext(k)).and_then(|d| d.add(&l)).map_err(|_| Error::MalformedState { site: k }))
        .collect()
}

/// Inverts [`u_from_ab`] from two consecutive finite `U` rows:
/// `A_n = Σ_{k<n} (U_k^{t−1} − U_k^t) + C`, `B_n = A_n − U_n + L`.
pub fn ab_from_u(prev: &[Rational], cur: &[Rational], l: &Rational, c: &Rational) -> Result<UltraState> {
    if prev.len() != cur.len() {
        return arg_err("U rows must have equal length");
    }
    if let Some(u1) = cur.first() {
        if u1 > l {
            return Err(Error::RecoveryDomain { u1: u1.to_string(), l: l.to_string() });
        }
    }
    let mut a = Vec::with_capacity(cur.len() + 1);
    let mut acc = c.clone();
    a.push(acc.clone());
    for (p, q) in prev.iter().zip(cur) {
        acc += p - q;
        a.push(acc.clone());
    }
    let b = cur.iter().zip(&a).map(|(u, a)| Ext::Finite(a - u + l)).collect();
    UltraState::new(a.into_iter().map(Ext::Finite).collect(), b)
}

fn finite<'a>(row: &'a [Ext], what: &str) -> Result<Vec<&'a Rational>> {
    row.iter().map(|v| v.finite().ok_or_else(|| Error::Singular(format!("{what} has an infinite entry")))).collect()
}

fn plus_part(u: &Rational, l: &Rational) -> Rational {
    (u - l).max(Rational::zero())
}

/// Residual of `U^{t+1} − 2U + U^{t−1} = M_{n+1} − 2M_n + M_{n−1}`,
/// `M = max[0, U − L]`, at every site with `U_0 = U_N = −∞`.
pub fn utoda_residual(rows: [&[Ext]; 3], l: &Rational) -> Result<Vec<Rational>> {
    let m = rows[1].len();
    if rows.iter().any(|r| r.len() != m) {
        return arg_err("U rows must have equal length");
    }
    let r: Vec<Vec<&Rational>> = rows.iter().map(|r| finite(r, "U row")).collect::<Result<_>>()?;
    let plus: Vec<Rational> = r[1].iter().map(|u| plus_part(u, l)).collect();
    let at = |k: isize| if k < 0 || k as usize >= m { Rational::zero() } else { plus[k as usize].clone() };
    Ok((0..m)
        .map(|k| {
            let ki = k as isize;
            let lhs = r[2][k] - int(2) * r[1][k] + r[0][k];
            lhs - (at(ki + 1) - int(2) * at(ki) + at(ki - 1))
        })
        .collect())
}

/// Like [`utoda_residual`] but for a window cut out of an unbounded lattice:
/// residuals at the inner sites `1..len−1` only.
pub fn utoda_residual_window(rows: [&[Rational]; 3], l: &Rational) -> Result<Vec<Rational>> {
    let m = rows[1].len();
    if rows.iter().any(|r| r.len() != m) || m < 3 {
        return arg_err("U window rows must have equal length >= 3");
    }
    Ok((1..m - 1)
        .map(|k| {
            let lhs = &rows[2][k] - int(2) * &rows[1][k] + &rows[0][k];
            let p = |i: usize| plus_part(&rows[1][i], l);
            lhs - (p(k + 1) - int(2) * p(k) + p(k - 1))
        })
        .collect())
}

/// `T_n = C Σ_{j=j0}^{j1} min[0, n − j]`, independent of `t`.
pub fn static_soliton_t(c: &Rational, j0: i64, j1: i64, n: i64) -> Result<Rational> {
    if c.is_negative() {
        return arg_err("static soliton amplitude must be nonnegative");
    }
    if j0 > j1 {
        return arg_err("static soliton needs j0 <= j1");
    }
    Ok((j0..=j1).fold(Rational::zero(), |acc, j| acc + c * int((n - j).min(0))))
}

/// Parameters of the max-plus soliton solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonParams {
    p: Vec<Rational>,
    sigma: Vec<i8>,
    c: Vec<Rational>,
    l: Rational,
}

impl SolitonParams {
    pub fn new(p: Vec<Rational>, sigma: Vec<i8>, c: Vec<Rational>, l: Rational) -> Result<Self> {
        if p.is_empty() || p.len() != sigma.len() || p.len() != c.len() {
            return arg_err("P, sigma and C must have the same nonzero length");
        }
        if p[0].is_negative() || p.windows(2).any(|w| w[0] > w[1]) {
            return arg_err("P must be nonnegative and ascending");
        }
        if sigma.iter().any(|s| s.abs() != 1) {
            return arg_err("sigma entries must be +1 or -1");
        }
        if !l.is_positive() {
            return arg_err("L must be positive");
        }
        if p.len() > 20 {
            return arg_err("at most 20 solitons");
        }
        Ok(SolitonParams { p, sigma, c, l })
    }

    pub fn count(&self) -> usize {
        self.p.len()
    }

    pub fn q(&self, j: usize) -> Rational {
        plus_part(&self.p[j], &self.l)
    }
}

/// Maximum over `μ ∈ {0,1}^N` of `Σ μ_j S_j − Σ_{i<j} μ_i μ_j (P_i + σ_iσ_j Q_i)`
/// with `S_j = P_j n − σ_j Q_j t + C_j`.
///
/// The phase shift of a pair uses the slower soliton `i`; with `P_j, Q_j` in
/// its place the formula stops solving the equation once two solitons moving
/// the same way collide.
pub fn n_soliton_t(p: &SolitonParams, t: i64, n: i64) -> Rational {
    n_soliton_t_with(p, t, n, |i, _| i)
}

fn n_soliton_t_with(p: &SolitonParams, t: i64, n: i64, shift_index: impl Fn(usize, usize) -> usize) -> Rational {
    let k = p.count();
    let s: Vec<Rational> =
        (0..k).map(|j| &p.p[j] * int(n) - int(p.sigma[j] as i64) * p.q(j) * int(t) + &p.c[j]).collect();
    let pair = |i: usize, j: usize| {
        let m = shift_index(i, j);
        &p.p[m] + int((p.sigma[i] * p.sigma[j]) as i64) * p.q(m)
    };
    (0u32..1 << k)
        .map(|mask| {
            let on: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
            let mut v: Rational = on.iter().map(|&j| s[j].clone()).sum();
            for (x, &i) in on.iter().enumerate() {
                for &j in &on[x + 1..] {
                    v -= pair(i, j);
                }
            }
            v
        })
        .max()
        .expect("at least the empty assignment")
}

/// `U_n = T_{n+1} − 2T_n + T_{n−1}` for any tau function of `n`.
pub fn second_difference(tau: impl Fn(i64) -> Rational, n: i64) -> Rational {
    tau(n + 1) - int(2) * tau(n) + tau(n - 1)
}

fn count(v: &Ext, what: &str, site: usize) -> Result<Option<i64>> {
    match v {
        Ext::PosInf => Ok(None),
        Ext::Finite(r) if r.is_integer() && !r.is_negative() => {
            r.numer().try_into().map(Some).map_err(|_| Error::Argument(format!("{what}_{site} is too large")))
        }
        _ => arg_err(format!("{what}_{site} = {v} is not a nonnegative integer count")),
    }
}

/// One round of the kicker/ball automaton. Cell `n` holds `A_n` kickers and
/// `B_n` balls; `min(A_n, B_n)` kickers each kick a ball one cell left and
/// stay, the rest walk one cell right. The last cell holds infinitely many
/// balls, and balls kicked out of cell 1 leave the system.
pub fn ca_step(s: &UltraState) -> Result<UltraState> {
    let n = s.n();
    let mut kickers = Vec::with_capacity(n);
    for k in 1..=n {
        let a = count(&s.a_ext(k), "A", k)?.ok_or_else(|| Error::Argument(format!("A_{k} must be finite")))?;
        kickers.push(a);
    }
    let mut balls = Vec::with_capacity(n);
    for k in 1..=n {
        balls.push(count(&s.b_ext(k), "B", k)?);
    }
    let kicked: Vec<i64> = kickers.iter().zip(&balls).map(|(&a, b)| b.map_or(a, |b| a.min(b))).collect();
    let mut new_a = vec![0i64; n];
    let mut new_b = balls.clone();
    for k in 0..n {
        new_a[k] += kicked[k];
        let movers = kickers[k] - kicked[k];
        if k + 1 < n {
            new_a[k + 1] += movers;
        }
        if let Some(b) = new_b[k].as_mut() {
            *b -= kicked[k];
        }
        if k >= 1 {
            if let Some(b) = new_b[k - 1].as_mut() {
                *b += kicked[k];
            }
        }
    }
    let to_ext = |v: Option<i64>| v.map_or(Ext::PosInf, Ext::from_i64);
    new_b.pop();
    UltraState::new(new_a.into_iter().map(Ext::from_i64).collect(), new_b.into_iter().map(to_ext).collect())
}

/// One line per row. Compact when every value is an integer in `0..=9`
/// (`.` for zero, rows right-padded with `.` to `width`); otherwise
/// space-separated values.
pub fn render_ascii(rows: &[Vec<Ext>], width: Option<usize>) -> String {
    let digit = |v: &Ext| match v {
        Ext::Finite(r) if r.is_integer() && !r.is_negative() && *r < int(10) => r.numer().try_into().ok(),
        _ => None,
    };
    let compact = rows.iter().flatten().all(|v| digit(v).is_some());
    let mut out = String::new();
    for row in rows {
        if compact {
            let mut line: String = row
                .iter()
                .map(|v| match digit(v).expect("checked") {
                    0u32 => '.',
                    d => char::from_digit(d, 10).expect("single digit"),
                })
                .collect();
            while line.chars().count() < width.unwrap_or(0) {
                line.push('.');
            }
            out.push_str(&line);
        } else {
            let parts: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&parts.join(" "));
        }
        out.push('\n');
    }
    out
}

/// `U` rows of a trajectory, rendered.
pub fn render_trajectory(states: &[UltraState], l: &Rational) -> Result<String> {
    let rows = states.iter().map(|s| u_from_ab(s, l)).collect::<Result<Vec<_>>>()?;
    Ok(render_ascii(&rows, states.first().map(UltraState::n)))
}

/// A positive real stored as its natural log, so that `e^{−X/ε}` stays
/// representable for small `ε`. Zero is `ln = −∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogFloat(pub f64);

impl LogFloat {
    /// `e^{−x/ε}`, with `+∞` mapped to zero.
    pub fn from_tropical(x: &Ext, eps: f64) -> Self {
        match x {
            Ext::PosInf => LogFloat(f64::NEG_INFINITY),
            Ext::NegInf => LogFloat(f64::INFINITY),
            Ext::Finite(r) => LogFloat(-crate::numeric::rational::to_f64(r) / eps),
        }
    }

    /// `−ε ln x`.
    pub fn to_tropical(self, eps: f64) -> f64 {
        -eps * self.0
    }
}

impl Add for LogFloat {
    type Output = LogFloat;
    fn add(self, rhs: LogFloat) -> LogFloat {
        let (hi, lo) = if self.0 >= rhs.0 { (self.0, rhs.0) } else { (rhs.0, self.0) };
        if lo == f64::NEG_INFINITY {
            return LogFloat(hi);
        }
        LogFloat(hi + (lo - hi).exp().ln_1p())
    }
}

impl Mul for LogFloat {
    type Output = LogFloat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogFloat) -> LogFloat {
        LogFloat(self.0 + rhs.0)
    }
}

impl Div for LogFloat {
    type Output = LogFloat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogFloat) -> LogFloat {
        LogFloat(self.0 - rhs.0)
    }
}

impl Zero for LogFloat {
    fn zero() -> Self {
        LogFloat(f64::NEG_INFINITY)
    }
    fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl One for LogFloat {
    fn one() -> Self {
        LogFloat(0.0)
    }
}

/// Largest gap between `−ε log` of one discrete step on `e^{−S/ε}` and
/// [`ud_step`] of `S`, over all finite entries.
pub fn tropicalization_gap(s: &UltraState, eps: f64) -> Result<f64> {
    use crate::toda::{step, TodaState};
    let lift = |v: &[Ext]| v.iter().map(|x| LogFloat::from_tropical(x, eps)).collect::<Vec<_>>();
    let discrete = step(&TodaState::new(lift(s.a()), lift(s.b()))?)?;
    let exact = ud_step(s)?;
    let mut gap = 0.0f64;
    for (x, y) in discrete.a().iter().chain(discrete.b()).zip(exact.a().iter().chain(exact.b())) {
        match y {
            Ext::Finite(r) => gap = gap.max((x.to_tropical(eps) - crate::numeric::rational::to_f64(r)).abs()),
            _ => {
                if x.0.is_finite() {
                    return Err(Error::Singular("finite discrete value where the limit is infinite".into()));
                }
            }
        }
    }
    Ok(gap)
}
