//! Fixed-seed inputs for the benchmarks in `benches/`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toda_core::lax::SpectralData;
use toda_core::sample;
use toda_core::tropical::TropicalMatrix;
use toda_core::ultradiscrete::UltraState;
use toda_core::{Rational, TodaState};

fn rng(salt: u64, n: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(salt << 16 | n as u64)
}

pub fn toda_state(n: usize) -> TodaState<Rational> {
    sample::positive_state(&mut rng(1, n), n)
}

pub fn spectral_data(n: usize) -> SpectralData<Rational> {
    sample::spectral_data(&mut rng(2, n), n)
}

pub fn tropical_matrix(n: usize) -> TropicalMatrix {
    sample::tropical_matrix(&mut rng(3, n), n)
}

pub fn ca_state(n: usize) -> UltraState {
    sample::ca_state(&mut rng(4, n), n, 5)
}
