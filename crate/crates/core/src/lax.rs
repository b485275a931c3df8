//! Lax pair, spectral data and the inverse problem: characteristic polynomial,
//! eigenvector minors, the quotient-algebra element `F`, Cramer recovery of
//! `(a, b)`, and Casorati tau functions.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{arg_err, Error, Result};
use crate::numeric::{exact_det, poly_roots, tridiag_det, BigFloat, Field, Poly, Rational, Ring};
use crate::toda::TodaState;

/// `X` upper bidiagonal (diagonal `a`, superdiagonal 1), `Y` lower bidiagonal
/// (diagonal 1, subdiagonal `−b`), both dense.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxPair<C> {
    pub x: Vec<Vec<C>>,
    pub y: Vec<Vec<C>>,
}

pub fn build_lax<C: Ring>(s: &TodaState<C>) -> LaxPair<C> {
    let n = s.n();
    let mut x = vec![vec![C::zero(); n]; n];
    let mut y = vec![vec![C::zero(); n]; n];
    for i in 0..n {
        x[i][i] = s.a()[i].clone();
        y[i][i] = C::one();
        if i + 1 < n {
            x[i][i + 1] = C::one();
            y[i + 1][i] = -s.b()[i].clone();
        }
    }
    LaxPair { x, y }
}

fn lambda_minus<C: Ring>(c: &C) -> Poly<C> {
    Poly::new(vec![-c.clone(), C::one()])
}

/// `f(λ) = det(λY − X)`, monic of degree N.
pub fn char_poly<C: Ring>(s: &TodaState<C>) -> Poly<C> {
    let diag: Vec<Poly<C>> = s.a().iter().map(lambda_minus).collect();
    let sub: Vec<C> = s.b().iter().map(|b| -b.clone()).collect();
    tridiag_det(&diag, &-C::one(), &sub).expect("state shapes are consistent")
}

/// Conserved quantities `I_1..I_N`, where `f = Σ (−1)^k I_k λ^{N−k}`.
pub fn invariants<C: Ring>(s: &TodaState<C>) -> Vec<C> {
    let f = char_poly(s);
    let n = s.n();
    (1..=n)
        .map(|k| {
            let c = f.coeff(n - k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// Trailing principal determinants `θ_j` of `λY − X` on rows/columns `j..N`,
/// for `j = 1..N+1` (index `j − 1`), with `θ_{N+1} = 1`.
fn trailing_dets<C: Ring>(s: &TodaState<C>) -> Vec<Poly<C>> {
    let n = s.n();
    let mut theta = vec![Poly::zero(); n + 2];
    theta[n] = Poly::one();
    for j in (1..=n).rev() {
        let diag = &lambda_minus(&s.a()[j - 1]) * &theta[j];
        theta[j - 1] = if j < n {
            let coupling = Poly::monomial(s.b()[j - 1].clone(), 1);
            &diag - &(&coupling * &theta[j + 1])
        } else {
            diag
        };
    }
    theta.truncate(n + 1);
    theta
}

/// Leading principal determinants `φ_0..φ_{N-1}`.
fn leading_dets<C: Ring>(s: &TodaState<C>) -> Vec<Poly<C>> {
    let n = s.n();
    let mut phi: Vec<Poly<C>> = vec![Poly::one()];
    for k in 1..n {
        let diag = &lambda_minus(&s.a()[k - 1]) * &phi[k - 1];
        let next = if k >= 2 {
            let coupling = Poly::monomial(s.b()[k - 2].clone(), 1);
            &diag - &(&coupling * &phi[k - 2])
        } else {
            diag
        };
        phi.push(next);
    }
    phi
}

/// Cofactor vectors `p_i = Δ_{N,i}` and `q_i = Δ_{1,i}` of `λY − X`, where
/// `Δ_{i,j} = (−1)^{i+j} det M_{i,j}`.
///
/// In closed form `p_i = φ_{i−1}` and `q_i = λ^{i−1} b_1⋯b_{i−1} θ_{i+1}`.
pub fn minor_vectors<C: Ring>(s: &TodaState<C>) -> (Vec<Poly<C>>, Vec<Poly<C>>) {
    let n = s.n();
    let p = leading_dets(s);
    let theta = trailing_dets(s);
    let mut q = Vec::with_capacity(n);
    let mut bprod = C::one();
    for (i, th) in theta.iter().enumerate().skip(1).take(n) {
        if i >= 2 {
            bprod = bprod * s.b()[i - 2].clone();
        }
        q.push(&Poly::monomial(bprod.clone(), i - 1) * th);
    }
    (p, q)
}

/// Residue class in `C[λ]/(f)`, kept reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientElement<C> {
    rep: Poly<C>,
    modulus: Poly<C>,
}

impl<C: Ring> QuotientElement<C> {
    pub fn new(rep: Poly<C>, modulus: Poly<C>) -> Result<Self> {
        let rep = rep.mod_reduce(&modulus)?;
        Ok(QuotientElement { rep, modulus })
    }

    pub fn representative(&self) -> &Poly<C> {
        &self.rep
    }

    pub fn modulus(&self) -> &Poly<C> {
        &self.modulus
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return arg_err("cannot combine residues with different moduli");
        }
        QuotientElement::new(&self.rep * &other.rep, self.modulus.clone())
    }

    pub fn mul_poly(&self, p: &Poly<C>) -> Self {
        QuotientElement::new(&self.rep * p, self.modulus.clone()).expect("modulus already validated")
    }

    pub fn scale(&self, c: &C) -> Self {
        QuotientElement { rep: self.rep.scale(c), modulus: self.modulus.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// `F = −Δ_{1,1} mod f`, so that `q ≡ −F·p`.
pub fn compute_f<C: Ring>(s: &TodaState<C>) -> QuotientElement<C> {
    let theta = trailing_dets(s);
    QuotientElement::new(-theta[1].clone(), char_poly(s)).expect("char poly is monic")
}

/// `λ·F mod f`.
pub fn evolve_f<C: Ring>(f: &QuotientElement<C>) -> QuotientElement<C> {
    f.mul_poly(&Poly::x())
}

/// A linear isomorphism `c: C[λ]/(f) → C^N`.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisMap<C> {
    /// Coefficients of the reduced representative in `1, λ, …, λ^{N−1}`.
    PowerBasis,
    /// `M` applied to the power-basis coordinates; `M` must be invertible.
    Matrix(Vec<Vec<C>>),
    /// Values at the roots of `f` (valid only when they are distinct roots).
    Evaluation(Vec<C>),
}

impl<C: Ring> BasisMap<C> {
    pub fn coords(&self, e: &QuotientElement<C>) -> Result<Vec<C>> {
        let n = e.modulus.degree().unwrap_or(0);
        let power: Vec<C> = (0..n).map(|k| e.rep.coeff(k)).collect();
        match self {
            BasisMap::PowerBasis => Ok(power),
            BasisMap::Matrix(m) => {
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return arg_err(format!("basis matrix must be {n}x{n}"));
                }
                Ok(m.iter()
                    .map(|row| row.iter().zip(&power).fold(C::zero(), |acc, (x, y)| acc + x.clone() * y.clone()))
                    .collect())
            }
            BasisMap::Evaluation(points) => {
                if points.len() != n {
                    return arg_err(format!("need {n} evaluation points, got {}", points.len()));
                }
                Ok(points.iter().map(|x| e.rep.eval(x)).collect())
            }
        }
    }
}

/// Recovers the state with characteristic polynomial `f` and spectral element `F`
/// through the Cramer determinant ratios `α_i`, `β_i`.
pub fn recover_ab<C: Field>(f: &Poly<C>, big_f: &QuotientElement<C>, basis: &BasisMap<C>) -> Result<TodaState<C>> {
    if big_f.modulus() != f {
        return arg_err("F does not live in C[λ]/(f)");
    }
    let n = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return arg_err("f must be monic of degree >= 1"),
    };
    let one = QuotientElement::new(Poly::one(), f.clone())?;
    let mut lam_pows = Vec::with_capacity(n);
    let mut cur = one;
    for _ in 0..n {
        lam_pows.push(basis.coords(&cur)?);
        cur = evolve_f(&cur);
    }
    let mut f_pows = Vec::with_capacity(n + 1);
    let mut cur = big_f.clone();
    for _ in 0..=n {
        f_pows.push(basis.coords(&cur)?);
        cur = evolve_f(&cur);
    }
    // Columns λ^{lo..hi} followed by Fλ^{flo..fhi}; transposition does not change det.
    let det = |lo: usize, hi: usize, flo: usize, fhi: usize| -> Result<C> {
        let mut cols: Vec<Vec<C>> = (lo..hi).map(|k| lam_pows[k].clone()).collect();
        cols.extend((flo..fhi).map(|k| f_pows[k].clone()));
        exact_det(&cols)
    };
    let nonzero = |v: C, what: String| -> Result<C> {
        if v.is_zero() {
            Err(Error::DegenerateSpectrum(format!("vanishing denominator in {what}")))
        } else {
            Ok(v)
        }
    };
    let sign = |k: usize, v: C| if k.is_multiple_of(2) { v } else { -v };

    let mut alpha = Vec::with_capacity(n + 1);
    let mut beta = Vec::with_capacity(n);
    for i in 1..=n + 1 {
        let den = nonzero(det(i - 1, n, 0, i - 1)?, format!("alpha_{i}/beta_{i}"))?;
        alpha.push(sign(i - 1, det(i - 1, n, 1, i)? / den.clone()));
        if i <= n {
            beta.push(sign(i, det(i - 1, n - 1, 0, i)? / den));
        }
    }
    let mut a = Vec::with_capacity(n);
    for i in 0..n {
        let den = nonzero(alpha[i].clone(), format!("alpha_{}", i + 1))?;
        a.push(-(alpha[i + 1].clone() / den));
    }
    let mut b = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let den = nonzero(beta[i].clone(), format!("beta_{}", i + 1))?;
        b.push(beta[i + 1].clone() / den);
    }
    TodaState::new(a, b)
}

/// Eigenvalues (descending), the values `f_i = c(F)_i` at them, and `f(λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData<C> {
    pub lambdas: Vec<C>,
    pub fs: Vec<C>,
    pub charpoly: Poly<C>,
}

impl SpectralData<Rational> {
    /// Builds data with `f = ∏(λ − λ_i)`; eigenvalues are sorted descending with their `f_i`.
    pub fn from_roots(lambdas: Vec<Rational>, fs: Vec<Rational>) -> Result<Self> {
        if lambdas.len() != fs.len() || lambdas.is_empty() {
            return arg_err("need equally many eigenvalues and f values, at least one");
        }
        let mut pairs: Vec<(Rational, Rational)> = lambdas.into_iter().zip(fs).collect();
        pairs.sort_by(|x, y| y.0.cmp(&x.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::DegenerateSpectrum("repeated eigenvalue".into()));
        }
        let charpoly = pairs.iter().fold(Poly::one(), |acc, (l, _)| &acc * &lambda_minus(l));
        let (lambdas, fs) = pairs.into_iter().unzip();
        Ok(SpectralData { lambdas, fs, charpoly })
    }
}

impl SpectralData<BigFloat> {
    /// Numeric spectral data of a state with real spectrum, at `precision` bits.
    pub fn from_state(s: &TodaState<Rational>, precision: usize) -> Result<Self> {
        let sb = s.map(|x| BigFloat::from_rational(x, precision));
        let charpoly = char_poly(&sb);
        let roots = poly_roots(&charpoly, precision)?;
        let tol = -(precision as f64) / 4.0;
        let mut lambdas = Vec::with_capacity(roots.len());
        for r in roots {
            if r.im.log2_abs() - r.re.log2_abs().max(0.0) > tol {
                return Err(Error::DegenerateSpectrum("characteristic polynomial has non-real roots".into()));
            }
            lambdas.push(r.re);
        }
        let big_f = compute_f(&sb);
        let fs = lambdas.iter().map(|l| big_f.representative().eval(l)).collect();
        Ok(SpectralData { lambdas, fs, charpoly })
    }
}

fn int_pow<C: Field>(x: &C, e: i64) -> Result<C> {
    let mut acc = C::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc * x.clone();
    }
    if e < 0 {
        if acc.is_zero() {
            return Err(Error::Singular("negative power of a zero eigenvalue".into()));
        }
        acc = C::one() / acc;
    }
    Ok(acc)
}

fn check_tau_args<C: Field>(sd: &SpectralData<C>, n: usize) -> Result<usize> {
    let big_n = sd.lambdas.len();
    if sd.fs.len() != big_n {
        return arg_err("spectral data has mismatched lengths");
    }
    if n == 0 || n > big_n + 1 {
        return arg_err(format!("tau index n = {n} outside 1..={}", big_n + 1));
    }
    for i in 0..big_n {
        for j in i + 1..big_n {
            if sd.lambdas[i] == sd.lambdas[j] {
                return Err(Error::DegenerateSpectrum(format!("eigenvalues {} and {} coincide", i + 1, j + 1)));
            }
        }
    }
    Ok(big_n)
}

/// Sign normalization of the tau sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauGauge {
    /// The determinant as written; satisfies `τ² − τ_{n−1}τ_{n+1} = τ^{t−1}τ^{t+1}`
    /// and `b = −τ_n τ_{n+2}^{t+1} / (τ_{n+1} τ_{n+1}^{t+1})`.
    Casorati,
    /// `τ_n ↦ (−1)^{n(n−1)/2} τ_n`; satisfies `τ² + τ_{n−1}τ_{n+1} = τ^{t−1}τ^{t+1}`
    /// and `b = τ_n τ_{n+2}^{t+1} / (τ_{n+1} τ_{n+1}^{t+1})`.
    Hirota,
}

impl TauGauge {
    fn sign(self, n: usize) -> bool {
        self == TauGauge::Hirota && (n * (n.saturating_sub(1)) / 2) % 2 == 1
    }
}

/// Double Casorati determinant: columns `λ^{n−1}..λ^{N−1}` then
/// `f λ^t .. f λ^{t+n−2}`, one row per eigenvalue.
pub fn casorati_tau<C: Field>(sd: &SpectralData<C>, n: usize, t: i64) -> Result<C> {
    let big_n = check_tau_args(sd, n)?;
    let mut rows = Vec::with_capacity(big_n);
    for (l, f) in sd.lambdas.iter().zip(&sd.fs) {
        let mut row: Vec<C> = Vec::with_capacity(big_n);
        for k in n - 1..big_n {
            row.push(int_pow(l, k as i64)?);
        }
        for j in 0..n as i64 - 1 {
            row.push(f.clone() * int_pow(l, t + j)?);
        }
        rows.push(row);
    }
    exact_det(&rows)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn vandermonde<C: Ring>(xs: &[&C]) -> C {
    let mut acc = C::one();
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            acc = acc * (xs[a].clone() - xs[b].clone());
        }
    }
    acc
}

/// Casorati tau by Laplace expansion over the rows `I` (|I| = n−1) carrying the
/// `f` columns. The sign exponent is `ΣI + N(N+1)/2 + (N−n+1) + (n−1)(n−2)/2`
/// with 1-based row indices.
pub fn casorati_tau_laplace<C: Field>(sd: &SpectralData<C>, n: usize, t: i64) -> Result<C> {
    let big_n = check_tau_args(sd, n)?;
    let mut total = C::zero();
    for rows_i in subsets(big_n, n - 1) {
        let rows_j: Vec<usize> = (0..big_n).filter(|r| !rows_i.contains(r)).collect();
        let sum_i: usize = rows_i.iter().map(|r| r + 1).sum();
        let eps = sum_i + big_n * (big_n + 1) / 2 + (big_n + 1 - n) + (n - 1) * (n.saturating_sub(2)) / 2;
        let mut term = C::one();
        for &j in &rows_j {
            term = term * int_pow(&sd.lambdas[j], n as i64 - 1)?;
        }
        for &i in &rows_i {
            term = term * sd.fs[i].clone() * int_pow(&sd.lambdas[i], t)?;
        }
        let lj: Vec<&C> = rows_j.iter().map(|&j| &sd.lambdas[j]).collect();
        let li: Vec<&C> = rows_i.iter().map(|&i| &sd.lambdas[i]).collect();
        term = term * vandermonde(&lj) * vandermonde(&li);
        total = if eps.is_multiple_of(2) { total + term } else { total - term };
    }
    Ok(total)
}

/// `τ_n^t` for `n = 1..N+1` and `t = t0..=t1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauGrid<C> {
    pub t0: i64,
    pub rows: Vec<Vec<C>>,
    pub gauge: TauGauge,
}

impl<C: Clone> TauGrid<C> {
    /// `τ_n^t`, with `τ_0 = τ_{N+2} = 0` outside the stored range of `n`.
    pub fn get(&self, n: usize, t: i64) -> Option<C>
    where
        C: Zero,
    {
        let row = self.rows.get(usize::try_from(t - self.t0).ok()?)?;
        if n == 0 || n == row.len() + 1 {
            return Some(C::zero());
        }
        row.get(n - 1).cloned()
    }

    pub fn t1(&self) -> i64 {
        self.t0 + self.rows.len() as i64 - 1
    }

    pub fn size(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len().saturating_sub(1))
    }
}

pub fn casorati_tau_grid<C: Field + Send + Sync>(
    sd: &SpectralData<C>,
    t0: i64,
    t1: i64,
    gauge: TauGauge,
) -> Result<TauGrid<C>> {
    if t1 < t0 {
        return arg_err("empty time range");
    }
    let big_n = sd.lambdas.len();
    let rows = (t0..=t1)
        .into_par_iter()
        .map(|t| {
            (1..=big_n + 1)
                .map(|n| {
                    let v = casorati_tau(sd, n, t)?;
                    Ok(if gauge.sign(n) { -v } else { v })
                })
                .collect::<Result<Vec<C>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TauGrid { t0, rows, gauge })
}

/// States at `t0..t1−1` from consecutive tau rows.
pub fn tau_to_ab<C: Field>(grid: &TauGrid<C>) -> Result<Vec<TodaState<C>>> {
    let big_n = grid.size();
    if big_n == 0 {
        return arg_err("tau grid has no columns");
    }
    let at = |n: usize, t: i64| grid.get(n, t).expect("inside grid");
    let nz = |v: C, n: usize, t: i64| -> Result<C> {
        if v.is_zero() {
            Err(Error::Singular(format!("tau_{n}^{t} = 0")))
        } else {
            Ok(v)
        }
    };
    let mut out = Vec::new();
    for t in grid.t0..grid.t1() {
        let mut a = Vec::with_capacity(big_n);
        for n in 1..=big_n {
            let den = nz(at(n, t + 1), n, t + 1)? * nz(at(n + 1, t), n + 1, t)?;
            a.push(at(n, t) * at(n + 1, t + 1) / den);
        }
        let mut b = Vec::with_capacity(big_n - 1);
        for n in 1..big_n {
            let den = at(n + 1, t) * at(n + 1, t + 1);
            let v = at(n, t) * at(n + 2, t + 1) / nz(den, n + 1, t)?;
            b.push(if grid.gauge == TauGauge::Casorati { -v } else { v });
        }
        out.push(TodaState::new(a, b)?);
    }
    Ok(out)
}

/// Residuals of the bilinear equation at every interior time and `n = 1..N+1`,
/// in the form appropriate to the grid's gauge.
pub fn bilinear_residuals<C: Field>(grid: &TauGrid<C>) -> Vec<C> {
    let big_n = grid.size();
    let at = |n: usize, t: i64| grid.get(n, t).expect("inside grid");
    let mut out = Vec::new();
    for t in grid.t0 + 1..grid.t1() {
        for n in 1..=big_n + 1 {
            let cross = at(n - 1, t) * at(n + 1, t);
            let sq = at(n, t) * at(n, t);
            let lhs = match grid.gauge {
                TauGauge::Hirota => sq + cross,
                TauGauge::Casorati => sq - cross,
            };
            out.push(lhs - at(n, t - 1) * at(n, t + 1));
        }
    }
    out
}

/// Number of distinct real roots of `p` in `(lo, ∞)` by Sturm's theorem.
/// `p(lo)` must be nonzero.
pub fn sturm_count_above(p: &Poly<Rational>, lo: &Rational) -> Result<usize> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(0);
    }
    if p.eval(lo).is_zero() {
        return arg_err("Sturm bound is a root");
    }
    let mut seq = vec![p.clone(), p.derivative()];
    while let Some(last) = seq.last() {
        if last.degree().unwrap_or(0) == 0 {
            break;
        }
        let prev = &seq[seq.len() - 2];
        let (_, r) = prev.div_rem_monic(&last.monic()?)?;
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    let changes = |vals: Vec<Rational>| {
        let signs: Vec<bool> = vals.into_iter().filter(|v| !v.is_zero()).map(|v| v > Rational::zero()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let at_lo = changes(seq.iter().map(|q| q.eval(lo)).collect());
    let at_inf = changes(seq.iter().map(|q| q.leading().cloned().unwrap_or_else(Rational::zero)).collect());
    Ok(at_lo - at_inf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{cofactor_det, int, rat};
    use crate::toda::step;
    use proptest::prelude::*;

    fn st(a: &[i64], b: &[i64]) -> TodaState<Rational> {
        TodaState::new(a.iter().map(|&v| int(v)).collect(), b.iter().map(|&v| int(v)).collect()).unwrap()
    }

    fn poly(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&v| int(v)).collect())
    }

    fn positive_state(max_n: usize) -> impl Strategy<Value = TodaState<Rational>> {
        (1..=max_n).prop_flat_map(|n| {
            let r = (1i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q));
            (prop::collection::vec(r.clone(), n), prop::collection::vec(r, n - 1))
                .prop_map(|(a, b)| TodaState::new(a, b).unwrap())
        })
    }

    /// `Δ_{i,j}` of `λY − X` by explicit cofactor expansion over `Q[λ]`.
    fn cofactor(s: &TodaState<Rational>, i: usize, j: usize) -> Poly<Rational> {
        let lp = build_lax(&s.map(|v| Poly::constant(v.clone())));
        let n = s.n();
        let m: Vec<Vec<Poly<Rational>>> = (0..n)
            .filter(|&r| r != i)
            .map(|r| (0..n).filter(|&c| c != j).map(|c| &(&Poly::x() * &lp.y[r][c]) - &lp.x[r][c]).collect())
            .collect();
        let d = cofactor_det(&m).unwrap();
        if (i + j).is_multiple_of(2) {
            d
        } else {
            -d
        }
    }

    #[test]
    fn lax_shapes() {
        let lp = build_lax(&st(&[1, 2], &[1]));
        assert_eq!(lp.x, vec![vec![int(1), int(1)], vec![int(0), int(2)]]);
        assert_eq!(lp.y, vec![vec![int(1), int(0)], vec![int(-1), int(1)]]);
        let one = build_lax(&st(&[5], &[]));
        assert_eq!((one.x, one.y), (vec![vec![int(5)]], vec![vec![int(1)]]));
        let s = st(&[3, 1, 4, 1], &[5, 9, 2]);
        assert_eq!(exact_det(&build_lax(&s).y).unwrap(), int(1));
    }

    #[test]
    fn two_site_spectral_problem() {
        let s = st(&[1, 2], &[1]);
        let f = char_poly(&s);
        assert_eq!(f, poly(&[2, -4, 1]));
        assert_eq!(invariants(&s), vec![int(4), int(2)]);
        let (p, q) = minor_vectors(&s);
        assert_eq!(p, vec![poly(&[1]), poly(&[-1, 1])]);
        assert_eq!(q, vec![poly(&[-2, 1]), poly(&[0, 1])]);
        let big_f = compute_f(&s);
        assert_eq!(big_f.representative(), &poly(&[2, -1]));
        // (λ − 2)(λ − 1) ≡ λ mod f
        assert_eq!((&poly(&[-2, 1]) * &poly(&[-1, 1])).mod_reduce(&f).unwrap(), poly(&[0, 1]));
    }

    #[test]
    fn minors_match_cofactor_expansion() {
        let s = TodaState::new(vec![rat(3, 2), int(2), rat(1, 3), int(5)], vec![int(1), rat(2, 5), int(3)]).unwrap();
        let (p, q) = minor_vectors(&s);
        let n = s.n();
        for j in 0..n {
            assert_eq!(p[j], cofactor(&s, n - 1, j));
            assert_eq!(q[j], cofactor(&s, 0, j));
        }
    }

    #[test]
    fn single_site_quotient() {
        let s = st(&[3], &[]);
        let f = char_poly(&s);
        let one = QuotientElement::new(Poly::one(), f.clone()).unwrap();
        assert_eq!(evolve_f(&one).representative(), &poly(&[3]));
        assert_eq!(recover_ab(&f, &compute_f(&s), &BasisMap::PowerBasis).unwrap(), s);
    }

    #[test]
    fn moduli_must_agree() {
        let a = QuotientElement::new(poly(&[1, 1]), poly(&[0, 0, 1])).unwrap();
        let b = QuotientElement::new(poly(&[1]), poly(&[1, 0, 1])).unwrap();
        assert!(a.mul(&b).is_err());
        assert!(QuotientElement::new(poly(&[1]), poly(&[1, 2])).is_err());
    }

    #[test]
    fn recovery_ignores_basis_and_scale() {
        let s = st(&[1, 2], &[1]);
        let f = char_poly(&s);
        let big_f = compute_f(&s);
        let m = vec![vec![int(2), int(1)], vec![int(-1), int(3)]];
        let r1 = recover_ab(&f, &big_f, &BasisMap::PowerBasis).unwrap();
        let r2 = recover_ab(&f, &big_f, &BasisMap::Matrix(m)).unwrap();
        let r3 = recover_ab(&f, &big_f.scale(&rat(-7, 3)), &BasisMap::PowerBasis).unwrap();
        assert_eq!(r1, s);
        assert_eq!(r2, s);
        assert_eq!(r3, s);
    }

    #[test]
    fn degenerate_f_is_rejected() {
        let s = st(&[1, 2], &[1]);
        let f = char_poly(&s);
        let zero = QuotientElement::new(Poly::zero(), f.clone()).unwrap();
        assert!(matches!(recover_ab(&f, &zero, &BasisMap::PowerBasis), Err(Error::DegenerateSpectrum(_))));
    }

    fn sample_data() -> SpectralData<Rational> {
        SpectralData::from_roots(vec![int(5), rat(1, 2), int(2), rat(7, 3)], vec![int(-3), rat(1, 4), int(2), int(-1)])
            .unwrap()
    }

    #[test]
    fn tau_edge_cases() {
        let sd = sample_data();
        let v = vandermonde(&sd.lambdas.iter().collect::<Vec<_>>());
        let n = sd.lambdas.len();
        // n = 1: columns λ^0..λ^{N−1}, whose determinant is ∏_{i<j}(λ_j − λ_i)
        let sign = if (n * (n - 1) / 2).is_multiple_of(2) { int(1) } else { int(-1) };
        assert_eq!(casorati_tau(&sd, 1, 3).unwrap(), &sign * &v);
        for t in [-2i64, 0, 3] {
            let prod =
                sd.lambdas.iter().zip(&sd.fs).fold(Rational::one(), |acc, (l, f)| acc * f * int_pow(l, t).unwrap());
            assert_eq!(casorati_tau(&sd, n + 1, t).unwrap(), &prod * &sign * &v);
        }
        assert!(casorati_tau(&sd, 0, 0).is_err());
        assert!(casorati_tau(&sd, n + 2, 0).is_err());
        let mut bad = sd.clone();
        bad.lambdas[1] = bad.lambdas[0].clone();
        assert!(matches!(casorati_tau(&bad, 2, 0), Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn laplace_matches_direct() {
        let sd = sample_data();
        for n in 1..=5 {
            for t in -1..3 {
                assert_eq!(casorati_tau_laplace(&sd, n, t).unwrap(), casorati_tau(&sd, n, t).unwrap(), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn tau_grid_gives_trajectory() {
        let sd = sample_data();
        for gauge in [TauGauge::Casorati, TauGauge::Hirota] {
            let grid = casorati_tau_grid(&sd, 0, 6, gauge).unwrap();
            assert!(bilinear_residuals(&grid).iter().all(Zero::is_zero));
            let states = tau_to_ab(&grid).unwrap();
            assert_eq!(states.len(), 6);
            for w in states.windows(2) {
                assert_eq!(step(&w[0]).unwrap(), w[1]);
            }
            assert_eq!(char_poly(&states[0]), sd.charpoly);
            // c(F) at the eigenvalues is proportional to the prescribed f_i
            let big_f = compute_f(&states[0]);
            let vals = BasisMap::Evaluation(sd.lambdas.clone()).coords(&big_f).unwrap();
            let ratio = &vals[0] / &sd.fs[0];
            for (v, f) in vals.iter().zip(&sd.fs) {
                assert_eq!(v, &(&ratio * f));
            }
        }
    }

    #[test]
    fn raw_grid_fails_the_plus_form() {
        let sd = sample_data();
        let mut grid = casorati_tau_grid(&sd, 0, 3, TauGauge::Casorati).unwrap();
        grid.gauge = TauGauge::Hirota;
        assert!(bilinear_residuals(&grid).iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn single_eigenvalue_tau() {
        let sd = SpectralData::from_roots(vec![rat(3, 2)], vec![int(2)]).unwrap();
        let grid = casorati_tau_grid(&sd, 0, 4, TauGauge::Hirota).unwrap();
        for s in tau_to_ab(&grid).unwrap() {
            assert_eq!(s.a(), &[rat(3, 2)]);
        }
    }

    #[test]
    fn sturm_counts() {
        // (λ−1)(λ−2)(λ+3)
        let p = &(&poly(&[-1, 1]) * &poly(&[-2, 1])) * &poly(&[3, 1]);
        assert_eq!(sturm_count_above(&p, &int(0)).unwrap(), 2);
        assert_eq!(sturm_count_above(&p, &int(-5)).unwrap(), 3);
        assert_eq!(sturm_count_above(&poly(&[1, 0, 1]), &int(-9)).unwrap(), 0);
    }

    #[test]
    fn numeric_spectral_signs() {
        let s = st(&[1, 2, 3], &[1, 2]);
        let sd = SpectralData::from_state(&s, 256).unwrap();
        for (i, f) in sd.fs.iter().enumerate() {
            // (−1)^n f_n > 0 with n 1-based
            assert_eq!(f.is_negative(), i % 2 == 0, "f_{} = {}", i + 1, f);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lemma_identity(s in positive_state(6)) {
            let f = char_poly(&s);
            let (p, q) = minor_vectors(&s);
            let big_f = compute_f(&s);
            for (pi, qi) in p.iter().zip(&q) {
                let r = (qi + &(big_f.representative() * pi)).mod_reduce(&f).unwrap();
                prop_assert!(r.is_zero());
            }
        }

        #[test]
        fn property_a_and_b(s in positive_state(6)) {
            let n = s.n();
            let (p, q) = minor_vectors(&s);
            let mut aprod = Rational::one();
            let mut bprod = Rational::one();
            for i in 1..=n {
                prop_assert_eq!(p[i - 1].degree(), Some(i - 1));
                prop_assert!(p[i - 1].is_monic());
                let sign = if (i - 1) % 2 == 0 { aprod.clone() } else { -aprod.clone() };
                prop_assert_eq!(p[i - 1].coeff(0), sign);
                // q_i = λ^{N−1}·(degree N−i in 1/λ): support in [i−1, N−1]
                prop_assert_eq!(q[i - 1].degree(), Some(n - 1));
                prop_assert!((0..i - 1).all(|k| q[i - 1].coeff(k).is_zero()));
                prop_assert_eq!(q[i - 1].coeff(n - 1), bprod.clone());
                aprod *= &s.a()[i - 1];
                if i < n {
                    bprod *= &s.b()[i - 1];
                }
            }
        }

        #[test]
        fn spectrum_is_real_positive_simple(s in positive_state(6)) {
            let f = char_poly(&s);
            prop_assert_eq!(sturm_count_above(&f, &int(0)).unwrap(), s.n());
        }

        #[test]
        fn round_trip_and_evolution(s in positive_state(5)) {
            let f = char_poly(&s);
            let big_f = compute_f(&s);
            prop_assert_eq!(recover_ab(&f, &big_f, &BasisMap::PowerBasis).unwrap(), s.clone());
            let next = recover_ab(&f, &evolve_f(&big_f), &BasisMap::PowerBasis).unwrap();
            prop_assert_eq!(next, step(&s).unwrap());
        }

        #[test]
        fn hirota_gauge_solves_bilinear_form(seed in any::<u64>(), n in 1usize..=4) {
            let sd = crate::sample::spectral_data(&mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed), n);
            let grid = casorati_tau_grid(&sd, -2, 4, TauGauge::Hirota).unwrap();
            prop_assert!(bilinear_residuals(&grid).iter().all(Zero::is_zero));
        }

        #[test]
        fn char_poly_is_conserved(s in positive_state(6)) {
            let f = char_poly(&s);
            let mut cur = s;
            for _ in 0..5 {
                cur = step(&cur).unwrap();
                prop_assert_eq!(char_poly(&cur), f.clone());
            }
        }
    }
}
