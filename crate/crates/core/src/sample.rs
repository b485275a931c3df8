//! Seeded random inputs for the check suites and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lax::SpectralData;
use crate::numeric::{int, rat, Rational};
use crate::toda::TodaState;
use crate::tropical::{Ext, TropicalMatrix};
use crate::ultradiscrete::{SolitonParams, UltraState};

fn small_positive<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

/// `a_n, b_n` of the form `p/q` with `1 <= p <= 9`, `1 <= q <= 4`.
pub fn positive_state<R: Rng>(rng: &mut R, n: usize) -> TodaState<Rational> {
    let a = (0..n).map(|_| small_positive(rng)).collect();
    let b = (1..n).map(|_| small_positive(rng)).collect();
    TodaState::new(a, b).expect("shape by construction")
}

/// Distinct positive rational eigenvalues with sign-alternating `f_i`
/// (`(−1)^i f_i > 0` in descending eigenvalue order).
pub fn spectral_data<R: Rng>(rng: &mut R, n: usize) -> SpectralData<Rational> {
    let mut pool: Vec<Rational> = (1..=12).flat_map(|p| (1..=3).map(move |q| rat(p, q))).collect();
    pool.sort();
    pool.dedup();
    pool.shuffle(rng);
    let mut lambdas: Vec<Rational> = pool.into_iter().take(n).collect();
    lambdas.sort_by(|x, y| y.cmp(x));
    let fs = (0..n)
        .map(|i| {
            let m = small_positive(rng);
            if i % 2 == 0 {
                -m
            } else {
                m
            }
        })
        .collect();
    SpectralData::from_roots(lambdas, fs).expect("distinct eigenvalues")
}

/// Integer entries in `−20..20`, about one in ten `+∞`.
pub fn tropical_matrix<R: Rng>(rng: &mut R, n: usize) -> TropicalMatrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if rng.gen_ratio(1, 10) { Ext::PosInf } else { Ext::from_i64(rng.gen_range(-20..20)) })
                .collect()
        })
        .collect();
    TropicalMatrix::new(rows).expect("square by construction")
}

/// Kicker and ball counts in `0..=max`.
pub fn ca_state<R: Rng>(rng: &mut R, n: usize, max: i64) -> UltraState {
    let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
    let b: Vec<i64> = (1..n).map(|_| rng.gen_range(0..=max)).collect();
    UltraState::from_ints(&a, &b).expect("shape by construction")
}

/// Finite rational exponents in `0..=4` with denominators up to 2.
pub fn ultra_state<R: Rng>(rng: &mut R, n: usize) -> UltraState {
    let mut v = || Ext::Finite(rat(rng.gen_range(0..=8), rng.gen_range(1..=2)));
    let a = (0..n).map(|_| v()).collect();
    let b = (1..n).map(|_| v()).collect();
    UltraState::new(a, b).expect("shape by construction")
}

/// `count` solitons with distinct integer `P` in `1..=6`, random directions and
/// phases, `L = 1`.
pub fn soliton_params<R: Rng>(rng: &mut R, count: usize) -> SolitonParams {
    let mut ps: Vec<i64> = (1..=6).collect();
    ps.shuffle(rng);
    let mut ps: Vec<i64> = ps.into_iter().take(count).collect();
    ps.sort_unstable();
    let sigma = (0..count).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let c = (0..count).map(|_| int(rng.gen_range(-10..=10))).collect();
    SolitonParams::new(ps.into_iter().map(int).collect(), sigma, c, int(1)).expect("valid parameters")
}
