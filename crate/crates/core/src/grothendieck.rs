//! Tau functions for the maximally degenerate spectrum `f = (λ − γ)^N` and the
//! Jacobi–Trudi determinant of the dual β-Grothendieck polynomial of the
//! rectangle `((N−n+1)^{n−1})`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{arg_err, Result};
use crate::numeric::rational::{gen_binomial, powi};
use crate::numeric::{cofactor_det, format_rational, Rational};

/// Polynomial in `c_0, c_1, …` with rational coefficients. Exponent vectors
/// carry no trailing zeros, so equal polynomials compare equal.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CPolynomial {
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl CPolynomial {
    pub fn constant(c: Rational) -> Self {
        let mut p = CPolynomial::default();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    /// The coordinate function `c_i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = CPolynomial::default();
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return CPolynomial::default();
        }
        CPolynomial { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    /// Largest variable index present, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().filter(|e| !e.is_empty()).map(|e| e.len() - 1).max()
    }

    /// `Some(r)` when `self = r·other` with `other ≠ 0`.
    pub fn ratio_to(&self, other: &CPolynomial) -> Option<Rational> {
        let (e, c) = other.terms.iter().next()?;
        let r = self.terms.get(e).cloned().unwrap_or_else(Rational::zero) / c;
        (other.scale(&r) == *self).then_some(r)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl Zero for CPolynomial {
    fn zero() -> Self {
        CPolynomial::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for CPolynomial {
    fn one() -> Self {
        CPolynomial::constant(Rational::one())
    }
}

impl Add for CPolynomial {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for CPolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        CPolynomial { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for CPolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for CPolynomial {
    type Output = Self;
    // exponents add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        let mut out = CPolynomial::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let len = e1.len().max(e2.len());
                let e: Vec<u32> =
                    (0..len).map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPolynomial({self})")
    }
}

impl fmt::Display for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let negative = *c < Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("c{i}") } else { format!("c{i}^{p}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", format_rational(&mag))?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `C[λ]/((λ − γ)^N) = C[μ]/(μ^N)` with `μ = λ − γ`; elements are
/// coefficient vectors in `1, μ, …, μ^{N−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateAlgebra {
    n: usize,
    gamma: Rational,
    beta: Rational,
}

impl DegenerateAlgebra {
    pub fn new(n: usize, gamma: Rational) -> Result<Self> {
        if n == 0 {
            return arg_err("the algebra needs N >= 1");
        }
        if gamma.is_zero() {
            return arg_err("gamma must be nonzero");
        }
        let beta = gamma.recip();
        Ok(DegenerateAlgebra { n, gamma, beta })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// `D = det(×λ) = γ^N`.
    pub fn d(&self) -> Rational {
        powi(&self.gamma, self.n as i64)
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().take(self.n - i) {
                out[i + j] += xi * yj;
            }
        }
        out
    }

    fn unit(&self, k: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.n];
        if k < self.n {
            v[k] = Rational::one();
        }
        v
    }

    /// `λ = μ + γ`.
    pub fn lambda(&self) -> Vec<Rational> {
        let mut v = self.unit(0);
        v[0] = self.gamma.clone();
        if self.n > 1 {
            v[1] = Rational::one();
        }
        v
    }

    /// `(μ + γ)^{-1} = Σ_k (−1)^k μ^k / γ^{k+1}`.
    pub fn lambda_inverse(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|k| {
                let v = powi(&self.beta, k as i64 + 1);
                if k % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }

    pub fn pow(&self, x: &[Rational], e: usize) -> Vec<Rational> {
        (0..e).fold(self.unit(0), |acc, _| self.mul(&acc, x))
    }

    /// Coordinates of `F·g` with `F = Σ c_i μ^i` symbolic and `g` given.
    fn times_symbolic_f(&self, g: &[Rational]) -> Vec<CPolynomial> {
        (0..self.n)
            .map(|j| (0..=j).fold(CPolynomial::zero(), |acc, k| acc + CPolynomial::var(k).scale(&g[j - k])))
            .collect()
    }

    /// `κ_{p,1..N}`: coordinates of `F (μ/(μ+γ))^{p−1}`, computed in the algebra.
    pub fn kappa_via_algebra(&self, p: usize) -> Vec<CPolynomial> {
        let ratio = self.mul(&self.unit(1), &self.lambda_inverse());
        self.times_symbolic_f(&self.pow(&ratio, p.saturating_sub(1)))
    }

    /// `κ_{p,q} = β^{p−1} Σ_i binom(1−p, i) β^i c_{q−p−i}` for `q = 1..N`, with the
    /// series cut where the `c` index turns negative.
    pub fn kappa_via_binomial(&self, p: usize) -> Vec<CPolynomial> {
        let pre = powi(&self.beta, p as i64 - 1);
        (1..=self.n).map(|q| binomial_entry(&self.beta, p, q as i64 - p as i64).scale(&pre)).collect()
    }
}

/// `Σ_{i ≥ 0, top−i ≥ 0} binom(1−p, i) β^i c_{top−i}`.
fn binomial_entry(beta: &Rational, p: usize, top: i64) -> CPolynomial {
    let mut acc = CPolynomial::zero();
    for i in 0..=top.max(-1) {
        let w = gen_binomial(1 - p as i64, i as u32) * powi(beta, i);
        acc = acc + CPolynomial::var((top - i) as usize).scale(&w);
    }
    acc
}

fn check_n(alg_n: usize, n: usize) -> Result<()> {
    if n == 0 || n > alg_n + 1 {
        return arg_err(format!("tau index n = {n} outside 1..={}", alg_n + 1));
    }
    Ok(())
}

/// `τ_n = D^{n−1} β^{(n−1)(n−2)/2} det(κ_{p, N−n+1+q})_{p,q=1}^{n−1}`.
pub fn degenerate_tau(alg: &DegenerateAlgebra, n: usize) -> Result<CPolynomial> {
    check_n(alg.n, n)?;
    let m = n - 1;
    let base = alg.n - m;
    let kappas: Vec<Vec<CPolynomial>> = (1..=m).map(|p| alg.kappa_via_algebra(p)).collect();
    let mat: Vec<Vec<CPolynomial>> =
        (0..m).map(|p| (1..=m).map(|q| kappas[p][base + q - 1].clone()).collect()).collect();
    let det = cofactor_det(&mat)?;
    let pre = powi(&alg.d(), m as i64) * powi(&alg.beta, (m * m.saturating_sub(1) / 2) as i64);
    Ok(det.scale(&pre))
}

/// `τ_n` straight from its definition: the N×N determinant with columns
/// `c(λ^{n−1}), …, c(λ^{N−1}), c(Fλ), …, c(Fλ^{n−1})` in μ-coordinates.
pub fn degenerate_tau_by_definition(alg: &DegenerateAlgebra, n: usize) -> Result<CPolynomial> {
    check_n(alg.n, n)?;
    let lam = alg.lambda();
    let mut cols: Vec<Vec<CPolynomial>> = Vec::with_capacity(alg.n);
    for k in n - 1..alg.n {
        cols.push(alg.pow(&lam, k).into_iter().map(CPolynomial::constant).collect());
    }
    for k in 1..n {
        cols.push(alg.times_symbolic_f(&alg.pow(&lam, k)));
    }
    cofactor_det(&cols)
}

/// `det(Σ_i binom(1−p,i) β^i h_{N−n+1+q−p−i})_{p,q=1}^{n−1}` with `h_j ↦ c_j`
/// (so `h_0 ↦ c_0`, keeping the result homogeneous) and `h_j = 0` for `j < 0`.
pub fn jacobi_trudi_dual_grothendieck(big_n: usize, n: usize, beta: &Rational) -> Result<CPolynomial> {
    check_n(big_n, n)?;
    let m = n - 1;
    let base = (big_n - m) as i64;
    let mat: Vec<Vec<CPolynomial>> =
        (1..=m).map(|p| (1..=m).map(|q| binomial_entry(beta, p, base + q as i64 - p as i64)).collect()).collect();
    cofactor_det(&mat)
}

/// Schur Jacobi–Trudi determinant `det(h_{N−n+1+q−p})` for the same rectangle.
pub fn schur_jacobi_trudi(big_n: usize, n: usize) -> Result<CPolynomial> {
    check_n(big_n, n)?;
    let m = n - 1;
    let base = (big_n - m) as i64;
    let mat: Vec<Vec<CPolynomial>> = (1..=m)
        .map(|p| {
            (1..=m)
                .map(|q| {
                    let j = base + q as i64 - p as i64;
                    if j < 0 {
                        CPolynomial::zero()
                    } else {
                        CPolynomial::var(j as usize)
                    }
                })
                .collect()
        })
        .collect();
    cofactor_det(&mat)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRow {
    pub n: usize,
    pub tau: CPolynomial,
    pub jacobi_trudi: CPolynomial,
    /// `τ_n / JT_n` when the two are proportional.
    pub factor: Option<Rational>,
    /// `D^{n−1} β^{(n−1)(n−2)}`.
    pub predicted: Rational,
    pub pass: bool,
    /// Whether the bare `D^{n−1}` also works.
    pub plain_d_matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrothendieckReport {
    pub size: usize,
    pub gamma: Rational,
    pub rows: Vec<IdentityRow>,
}

impl GrothendieckReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

impl fmt::Display for GrothendieckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N = {}, gamma = {}", self.size, format_rational(&self.gamma))?;
        for r in &self.rows {
            let factor = r.factor.as_ref().map_or("none".to_string(), format_rational);
            writeln!(
                f,
                "n = {}: {} factor {} (predicted {}, bare D^(n-1) {})",
                r.n,
                if r.pass { "PASS" } else { "FAIL" },
                factor,
                format_rational(&r.predicted),
                if r.plain_d_matches { "matches" } else { "differs" },
            )?;
            writeln!(f, "  JT = {}", r.jacobi_trudi)?;
        }
        Ok(())
    }
}

/// Compares `τ_n` with the Jacobi–Trudi determinant for `n = 2..N+1`.
pub fn verify_grothendieck_identity(big_n: usize, gamma: &Rational) -> Result<GrothendieckReport> {
    let alg = DegenerateAlgebra::new(big_n, gamma.clone())?;
    let rows = (2..=big_n + 1)
        .into_par_iter()
        .map(|n| {
            let tau = degenerate_tau(&alg, n)?;
            let jt = jacobi_trudi_dual_grothendieck(big_n, n, alg.beta())?;
            let m = (n - 1) as i64;
            let plain = powi(&alg.d(), m);
            let predicted = &plain * powi(alg.beta(), m * (m - 1));
            let factor = tau.ratio_to(&jt);
            Ok(IdentityRow {
                n,
                pass: jt.scale(&predicted) == tau,
                plain_d_matches: jt.scale(&plain) == tau,
                tau,
                jacobi_trudi: jt,
                factor,
                predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrothendieckReport { size: big_n, gamma: gamma.clone(), rows })
}
