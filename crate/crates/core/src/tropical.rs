//! Min-plus arithmetic: extended rationals, tropical permanents, the tropical
//! tau `T_n^t` and its affine-in-`t` envelopes, and the passage to `(A, B, U)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{arg_err, Error, Result};
use crate::numeric::{format_rational, int, parse_rational, Rational};

/// `ℚ ∪ {−∞, +∞}`. Tropical values use only the finite part and `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    NegInf,
    Finite(Rational),
    PosInf,
}

/// A min-plus scalar: a rational or `+∞`.
pub type Tropical = Ext;

impl Ext {
    pub fn from_i64(v: i64) -> Self {
        Ext::Finite(int(v))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ext::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    /// Ordinary `+`, an error for `∞ − ∞`.
    pub fn add(&self, rhs: &Ext) -> Result<Ext> {
        Ok(match (self, rhs) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            (Ext::PosInf, Ext::NegInf) | (Ext::NegInf, Ext::PosInf) => {
                return Err(Error::DegenerateGrid("+inf + -inf".into()))
            }
            (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
            _ => Ext::NegInf,
        })
    }

    pub fn neg(&self) -> Ext {
        match self {
            Ext::NegInf => Ext::PosInf,
            Ext::PosInf => Ext::NegInf,
            Ext::Finite(a) => Ext::Finite(-a),
        }
    }

    pub fn sub(&self, rhs: &Ext) -> Result<Ext> {
        self.add(&rhs.neg())
    }

    /// Min-plus product (ordinary sum) of values that are never `−∞`.
    pub fn tmul(&self, rhs: &Ext) -> Ext {
        debug_assert!(*self != Ext::NegInf && *rhs != Ext::NegInf);
        match (self, rhs) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            _ => Ext::PosInf,
        }
    }

    pub fn parse(s: &str) -> Result<Ext> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(Ext::PosInf),
            "-inf" | "-∞" => Ok(Ext::NegInf),
            other => parse_rational(other).map(Ext::Finite),
        }
    }
}

impl From<Rational> for Ext {
    fn from(r: Rational) -> Self {
        Ext::Finite(r)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "inf"),
            Ext::Finite(r) => write!(f, "{}", format_rational(r)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TropicalMatrix {
    rows: Vec<Vec<Tropical>>,
}

impl TropicalMatrix {
    pub fn new(rows: Vec<Vec<Tropical>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return arg_err("tropical matrix must be square");
        }
        if rows.iter().flatten().any(|e| *e == Ext::NegInf) {
            return arg_err("tropical entries cannot be -inf");
        }
        Ok(TropicalMatrix { rows })
    }

    pub fn from_rationals(rows: Vec<Vec<Rational>>) -> Result<Self> {
        TropicalMatrix::new(rows.into_iter().map(|r| r.into_iter().map(Ext::Finite).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Tropical {
        &self.rows[i][j]
    }

    fn sub_matrix(&self, rows: &[usize], cols: &[usize]) -> TropicalMatrix {
        TropicalMatrix { rows: rows.iter().map(|&r| cols.iter().map(|&c| self.rows[r][c].clone()).collect()).collect() }
    }
}

/// Size up to which [`trop_permanent`] enumerates permutations.
pub const BRUTE_FORCE_MAX: usize = 8;

/// `min_σ Σ_i m_{i,σ(i)}`; the empty matrix gives 0.
pub fn trop_permanent(m: &TropicalMatrix) -> Tropical {
    if m.size() <= BRUTE_FORCE_MAX {
        trop_permanent_brute(m)
    } else {
        trop_permanent_memo(m)
    }
}

/// Enumerates all permutations, split in parallel over the first row's column.
pub fn trop_permanent_brute(m: &TropicalMatrix) -> Tropical {
    let n = m.size();
    if n == 0 {
        return Ext::from_i64(0);
    }
    if let Some((ints, denom)) = scaled_ints(m) {
        let best = (0..n)
            .into_par_iter()
            .filter_map(|c0| {
                let first = ints[0][c0]?;
                let mut used = vec![false; n];
                used[c0] = true;
                let mut best = None;
                permute_int(&ints, 1, &mut used, first, &mut best);
                best
            })
            .min();
        return best.map_or(Ext::PosInf, |v| Ext::Finite(Rational::new(BigInt::from(v), denom)));
    }
    (0..n)
        .into_par_iter()
        .map(|c0| {
            let mut used = vec![false; n];
            used[c0] = true;
            let mut best = Ext::PosInf;
            permute(m, 1, &mut used, m.get(0, c0).clone(), &mut best);
            best
        })
        .min()
        .expect("n >= 1")
}

/// Entries over a common denominator as machine integers, when no sum of
/// `n` of them can overflow.
fn scaled_ints(m: &TropicalMatrix) -> Option<(Vec<Vec<Option<i64>>>, BigInt)> {
    let denom = m.rows.iter().flatten().filter_map(Ext::finite).fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let limit = i64::MAX / (m.size() as i64 + 1);
    let rows = m
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Ext::Finite(r) => {
                        let v = (r.numer() * (&denom / r.denom())).to_i64()?;
                        (v.abs() <= limit).then_some(Some(v))
                    }
                    _ => Some(None),
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some((rows, denom))
}

fn permute_int(m: &[Vec<Option<i64>>], row: usize, used: &mut [bool], acc: i64, best: &mut Option<i64>) {
    if row == m.len() {
        if best.is_none_or(|b| acc < b) {
            *best = Some(acc);
        }
        return;
    }
    for c in 0..m.len() {
        if let (false, Some(v)) = (used[c], m[row][c]) {
            used[c] = true;
            permute_int(m, row + 1, used, acc + v, best);
            used[c] = false;
        }
    }
}

fn permute(m: &TropicalMatrix, row: usize, used: &mut [bool], acc: Tropical, best: &mut Tropical) {
    if row == m.size() {
        if acc < *best {
            *best = acc;
        }
        return;
    }
    for c in 0..m.size() {
        if !used[c] {
            used[c] = true;
            permute(m, row + 1, used, acc.tmul(m.get(row, c)), best);
            used[c] = false;
        }
    }
}

/// Row-by-row Laplace expansion memoized on the set of used columns.
pub fn trop_permanent_memo(m: &TropicalMatrix) -> Tropical {
    let n = m.size();
    if n == 0 {
        return Ext::from_i64(0);
    }
    assert!(n < usize::BITS as usize, "matrix too large for a column bitmask");
    let full = 1usize << n;
    let mut best = vec![Ext::PosInf; full];
    best[0] = Ext::from_i64(0);
    for mask in 0..full {
        if best[mask] == Ext::PosInf && mask != 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for c in (0..n).filter(|c| mask & (1 << c) == 0) {
            let cand = best[mask].tmul(m.get(row, c));
            let next = mask | (1 << c);
            if cand < best[next] {
                best[next] = cand;
            }
        }
    }
    best[full - 1].clone()
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
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

/// Laplace expansion along the row set `rows`: minimum over column sets `S`
/// of `TP(m[rows, S]) + TP(m[rest, rest of S])`.
pub fn trop_laplace(m: &TropicalMatrix, rows: &[usize]) -> Result<Tropical> {
    let n = m.size();
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != rows.len() || sorted.is_empty() || sorted.len() >= n || sorted[sorted.len() - 1] >= n {
        return arg_err("Laplace rows must be a nonempty proper subset of distinct row indices");
    }
    let rest: Vec<usize> = (0..n).filter(|r| !sorted.contains(r)).collect();
    let mut best = Ext::PosInf;
    for cols in subsets(n, sorted.len()) {
        let other: Vec<usize> = (0..n).filter(|c| !cols.contains(c)).collect();
        let v = trop_permanent(&m.sub_matrix(&sorted, &cols)).tmul(&trop_permanent(&m.sub_matrix(&rest, &other)));
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// `t ↦ min_k (slope_k·t + intercept_k)`, kept as a pruned lower envelope
/// sorted by ascending slope. No pieces means `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalAffine {
    pieces: Vec<(Rational, Rational)>,
}

impl TropicalAffine {
    /// Keeps exactly the pieces that are strictly minimal on some open interval
    /// of the real line; among equal slopes the smaller intercept wins.
    pub fn from_pieces(mut pieces: Vec<(Rational, Rational)>) -> Self {
        // descending slope, ascending intercept
        pieces.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        pieces.dedup_by(|later, earlier| later.0 == earlier.0);
        let cross = |l1: &(Rational, Rational), l2: &(Rational, Rational)| (&l2.1 - &l1.1) / (&l1.0 - &l2.0);
        let mut hull: Vec<(Rational, Rational)> = Vec::new();
        for p in pieces {
            while hull.len() >= 2 {
                let (l1, l2) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
                if cross(l1, l2) >= cross(l2, &p) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.reverse();
        TropicalAffine { pieces: hull }
    }

    pub fn pieces(&self) -> &[(Rational, Rational)] {
        &self.pieces
    }

    pub fn eval(&self, t: &Rational) -> Tropical {
        self.pieces.iter().map(|(s, c)| Ext::Finite(s * t + c)).min().unwrap_or(Ext::PosInf)
    }
}

fn format_piece(slope: &Rational, intercept: &Rational) -> String {
    if slope.is_zero() {
        return format_rational(intercept);
    }
    let t = if *slope == int(1) {
        "t".to_string()
    } else if *slope == int(-1) {
        "-t".to_string()
    } else if slope.is_integer() {
        format!("{}t", slope.numer())
    } else {
        format!("({})t", format_rational(slope))
    };
    if intercept.is_zero() {
        t
    } else if *intercept > Rational::zero() {
        format!("{t}+{}", format_rational(intercept))
    } else {
        format!("{t}{}", format_rational(intercept))
    }
}

impl fmt::Display for TropicalAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pieces.as_slice() {
            [] => write!(f, "inf"),
            [(s, c)] => write!(f, "{}", format_piece(s, c)),
            many => {
                let parts: Vec<String> = many.iter().map(|(s, c)| format_piece(s, c)).collect();
                write!(f, "min[{}]", parts.join(", "))
            }
        }
    }
}

/// Leading exponents `Λ_i` (ascending) and `F_i` of the spectral data.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalSpectralData {
    pub lambdas: Vec<Rational>,
    pub fs: Vec<Rational>,
    pub l: Rational,
}

impl TropicalSpectralData {
    pub fn new(lambdas: Vec<Rational>, fs: Vec<Rational>, l: Rational) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != fs.len() {
            return arg_err("need equally many Lambda and F values, at least one");
        }
        if lambdas.windows(2).any(|w| w[0] > w[1]) {
            return arg_err("Lambda must be sorted ascending");
        }
        Ok(TropicalSpectralData { lambdas, fs, l })
    }

    pub fn size(&self) -> usize {
        self.lambdas.len()
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.size() + 1 {
            return arg_err(format!("T index n = {n} outside 1..={}", self.size() + 1));
        }
        Ok(())
    }
}

/// `T_n^t`: the tropical permanent of the matrix with columns
/// `(n−1)Λ_i, …, (N−1)Λ_i, F_i + tΛ_i, …, F_i + (t+n−2)Λ_i`.
pub fn build_t(sd: &TropicalSpectralData, n: usize, t: i64) -> Result<Tropical> {
    sd.check_n(n)?;
    let big_n = sd.size();
    let rows = sd
        .lambdas
        .iter()
        .zip(&sd.fs)
        .map(|(l, f)| {
            let mut row: Vec<Rational> = (n - 1..big_n).map(|k| l * int(k as i64)).collect();
            row.extend((0..n as i64 - 1).map(|j| f + l * int(t + j)));
            row
        })
        .collect();
    Ok(trop_permanent(&TropicalMatrix::from_rationals(rows)?))
}

/// `T_n^t` as an envelope in `t`, from the Laplace split over the rows that
/// carry the `F` columns.
pub fn build_t_symbolic(sd: &TropicalSpectralData, n: usize) -> Result<TropicalAffine> {
    sd.check_n(n)?;
    let big_n = sd.size();
    let m = n - 1;
    let mut pieces = Vec::new();
    for rows_i in subsets(big_n, m) {
        let rows_j: Vec<usize> = (0..big_n).filter(|r| !rows_i.contains(r)).collect();
        let lam_block: Vec<Vec<Rational>> =
            rows_j.iter().map(|&j| (m..big_n).map(|k| &sd.lambdas[j] * int(k as i64)).collect()).collect();
        let stair: Vec<Vec<Rational>> =
            rows_i.iter().map(|&i| (0..m).map(|k| &sd.lambdas[i] * int(k as i64)).collect()).collect();
        let fixed = trop_permanent_memo(&TropicalMatrix::from_rationals(lam_block)?)
            .tmul(&trop_permanent_memo(&TropicalMatrix::from_rationals(stair)?));
        let base = fixed.finite().expect("finite entries").clone();
        let intercept = rows_i.iter().fold(base, |acc, &i| acc + &sd.fs[i]);
        let slope = rows_i.iter().fold(Rational::zero(), |acc, &i| acc + &sd.lambdas[i]);
        pieces.push((slope, intercept));
    }
    Ok(TropicalAffine::from_pieces(pieces))
}

/// `T_n^t` for `n = 1..N+1`, `t = t0..=t1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TGrid {
    pub t0: i64,
    pub rows: Vec<Vec<Tropical>>,
}

impl TGrid {
    pub fn from_envelopes(envelopes: &[TropicalAffine], t0: i64, t1: i64) -> Result<Self> {
        if t1 < t0 {
            return arg_err("empty time range");
        }
        let rows = (t0..=t1).map(|t| envelopes.iter().map(|e| e.eval(&int(t))).collect()).collect();
        Ok(TGrid { t0, rows })
    }

    pub fn get(&self, n: usize, t: i64) -> &Tropical {
        &self.rows[(t - self.t0) as usize][n - 1]
    }

    pub fn t1(&self) -> i64 {
        self.t0 + self.rows.len() as i64 - 1
    }

    pub fn size(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len().saturating_sub(1))
    }
}

pub fn t_grid(sd: &TropicalSpectralData, t0: i64, t1: i64) -> Result<TGrid> {
    let envelopes = (1..=sd.size() + 1).into_par_iter().map(|n| build_t_symbolic(sd, n)).collect::<Result<Vec<_>>>()?;
    TGrid::from_envelopes(&envelopes, t0, t1)
}

/// Rows of `A` (n = 1..N), `B` and `U` (n = 1..N−1) for `t = t0..t1−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbuGrid {
    pub t0: i64,
    pub a: Vec<Vec<Ext>>,
    pub b: Vec<Vec<Ext>>,
    pub u: Vec<Vec<Ext>>,
}

/// `A_n = T_n + T_{n+1}^{t+1} − T_n^{t+1} − T_{n+1}`,
/// `B_n = T_n + T_{n+2}^{t+1} − T_{n+1} − T_{n+1}^{t+1}`, `U = A − B + L`.
pub fn t_to_abu(grid: &TGrid, l: &Rational) -> Result<AbuGrid> {
    let big_n = grid.size();
    if big_n == 0 || grid.rows.len() < 2 {
        return arg_err("T grid needs at least two time rows and N >= 1");
    }
    let at = |n: usize, t: i64| grid.get(n, t);
    let four = |x: &Ext, y: &Ext, z: &Ext, w: &Ext| -> Result<Ext> { x.add(y)?.sub(z)?.sub(w) };
    let lext = Ext::Finite(l.clone());
    let (mut a, mut b, mut u) = (Vec::new(), Vec::new(), Vec::new());
    for t in grid.t0..grid.t1() {
        let arow = (1..=big_n)
            .map(|n| four(at(n, t), at(n + 1, t + 1), at(n, t + 1), at(n + 1, t)))
            .collect::<Result<Vec<_>>>()?;
        let brow = (1..big_n)
            .map(|n| four(at(n, t), at(n + 2, t + 1), at(n + 1, t), at(n + 1, t + 1)))
            .collect::<Result<Vec<_>>>()?;
        let urow = (0..big_n - 1).map(|k| arow[k].sub(&brow[k])?.add(&lext)).collect::<Result<Vec<_>>>()?;
        a.push(arow);
        b.push(brow);
        u.push(urow);
    }
    Ok(AbuGrid { t0: grid.t0, a, b, u })
}

impl PartialOrd<Rational> for Ext {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(&Ext::Finite(other.clone())))
    }
}

impl PartialEq<Rational> for Ext {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Ext::Finite(r) if r == other)
    }
}
