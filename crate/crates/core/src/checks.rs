//! Randomized and exhaustive invariant suites, shared by the CLI `check`
//! command and the tests.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{arg_err, Error, Result};
use crate::grothendieck::verify_grothendieck_identity;
use crate::io::{toda_state_json, ultra_state_json};
use crate::lax::{
    bilinear_residuals, casorati_tau_grid, char_poly, compute_f, evolve_f, invariants, recover_ab, tau_to_ab, BasisMap,
    TauGauge,
};
use crate::numeric::{int, rat};
use crate::sample;
use crate::toda::{local_conservation_residuals, step, trajectory};
use crate::tropical::{subsets, trop_laplace, trop_permanent_brute, trop_permanent_memo};
use crate::ultradiscrete::{ca_step, ud_step, UltraState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Conservation,
    Bilinear,
    Ca,
    Tropical,
    Grothendieck,
    Roundtrip,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Conservation, Suite::Bilinear, Suite::Ca, Suite::Tropical, Suite::Grothendieck, Suite::Roundtrip];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Conservation => "conservation",
            Suite::Bilinear => "bilinear",
            Suite::Ca => "ca",
            Suite::Tropical => "tropical",
            Suite::Grothendieck => "grothendieck",
            Suite::Roundtrip => "roundtrip",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Argument(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    pub seed: u64,
    /// Random cases per suite.
    pub cases: usize,
    /// Restrict size-parameterized suites to this `N`.
    pub n: Option<usize>,
    /// Largest `N` for the exhaustive automaton comparison.
    pub exhaustive_n: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { seed: 2018, cases: 50, n: None, exhaustive_n: 4 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    /// One line per failure, with a counterexample.
    pub failures: Vec<String>,
    pub details: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{status} {} ({} cases, {} failures)", self.suite, self.cases, self.failures.len())?;
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        for x in &self.failures {
            writeln!(f, "  counterexample: {x}")?;
        }
        Ok(())
    }
}

fn rng_for(cfg: &CheckConfig, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn size_in(cfg: &CheckConfig, rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    cfg.n.unwrap_or_else(|| rng.gen_range(lo..=hi))
}

pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Result<SuiteReport> {
    if cfg.n == Some(0) {
        return arg_err("N must be at least 1");
    }
    let mut rng = rng_for(cfg, suite);
    let mut failures = Vec::new();
    let mut details = Vec::new();
    let mut cases = 0;
    match suite {
        Suite::Conservation => {
            for _ in 0..cfg.cases {
                let n = size_in(cfg, &mut rng, 2, 8);
                let s = sample::positive_state(&mut rng, n);
                let traj = trajectory(&s, 20)?;
                let i0 = invariants(&s);
                let local_ok = traj.windows(2).all(|w| {
                    local_conservation_residuals(&w[0], &w[1])
                        .map(|(x, y)| x.iter().chain(&y).all(Zero::is_zero))
                        .unwrap_or(false)
                });
                if !local_ok || traj.iter().any(|x| invariants(x) != i0) {
                    failures.push(toda_state_json(&s).to_string());
                }
                cases += 1;
            }
            details.push("I_k constant over 20 steps; local form exact".into());
        }
        Suite::Bilinear => {
            for _ in 0..cfg.cases.min(20) {
                let n = size_in(cfg, &mut rng, 1, 5);
                let sd = sample::spectral_data(&mut rng, n);
                let grid = casorati_tau_grid(&sd, 0, 10, TauGauge::Hirota)?;
                let bilinear_ok = bilinear_residuals(&grid).iter().all(Zero::is_zero);
                let states = tau_to_ab(&grid)?;
                let evolves = states.windows(2).all(|w| step(&w[0]).map(|x| x == w[1]).unwrap_or(false));
                if !(bilinear_ok && evolves) {
                    let l: Vec<String> = sd.lambdas.iter().map(ToString::to_string).collect();
                    let f: Vec<String> = sd.fs.iter().map(ToString::to_string).collect();
                    failures.push(format!("lambdas {l:?}, fs {f:?}"));
                }
                cases += 1;
            }
            details.push("tau^2 + tau_(n-1) tau_(n+1) = tau^(t-1) tau^(t+1), t in 0..10".into());
        }
        Suite::Ca => {
            let mut check = |s: &UltraState| -> Result<()> {
                if ca_step(s)? != ud_step(s)? {
                    failures.push(ultra_state_json(s, None).to_string());
                }
                Ok(())
            };
            for n in 1..=cfg.exhaustive_n {
                let cells = 2 * n - 1;
                for code in 0..4usize.pow(cells as u32) {
                    let digits: Vec<i64> = (0..cells).map(|i| ((code >> (2 * i)) & 3) as i64).collect();
                    check(&UltraState::from_ints(&digits[..n], &digits[n..])?)?;
                    cases += 1;
                }
            }
            for _ in 0..cfg.cases {
                let n = size_in(cfg, &mut rng, cfg.exhaustive_n + 1, 12);
                check(&sample::ca_state(&mut rng, n, 5))?;
                cases += 1;
            }
            details.push(format!("exhaustive for N <= {} with entries 0..3", cfg.exhaustive_n));
        }
        Suite::Tropical => {
            for _ in 0..cfg.cases {
                let n = size_in(cfg, &mut rng, 1, 7);
                let m = sample::tropical_matrix(&mut rng, n);
                let brute = trop_permanent_brute(&m);
                let mut ok = trop_permanent_memo(&m) == brute;
                for k in 1..n {
                    for rows in subsets(n, k) {
                        ok &= trop_laplace(&m, &rows)? == brute;
                    }
                }
                if !ok {
                    failures.push(format!("{m:?}"));
                }
                cases += 1;
            }
            details.push("Laplace expansion over every row subset equals brute force".into());
        }
        Suite::Grothendieck => {
            let sizes: Vec<usize> = match cfg.n {
                Some(n) => vec![n],
                None => (1..=4).collect(),
            };
            for n in sizes {
                for gamma in [int(1), int(2), int(-3), rat(1, 2)] {
                    let report = verify_grothendieck_identity(n, &gamma)?;
                    for line in report.to_string().lines() {
                        details.push(line.to_string());
                    }
                    if !report.all_pass() {
                        failures.push(format!("N = {n}, gamma = {gamma}"));
                    }
                    cases += 1;
                }
            }
        }
        Suite::Roundtrip => {
            for _ in 0..cfg.cases {
                let n = size_in(cfg, &mut rng, 1, 5);
                let s = sample::positive_state(&mut rng, n);
                let f = char_poly(&s);
                let big_f = compute_f(&s);
                let back = recover_ab(&f, &big_f, &BasisMap::PowerBasis)?;
                let commutes = recover_ab(&f, &evolve_f(&big_f), &BasisMap::PowerBasis)? == step(&s)?;
                if back != s || !commutes {
                    failures.push(toda_state_json(&s).to_string());
                }
                cases += 1;
            }
            details.push("recover_ab(char_poly, F) = state; recovering from lambda F gives the next step".into());
        }
    }
    Ok(SuiteReport { suite, cases, failures, details })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_budgets() {
        let cfg = CheckConfig { cases: 6, exhaustive_n: 3, ..Default::default() };
        for suite in Suite::ALL {
            let cfg =
                if suite == Suite::Grothendieck { CheckConfig { n: Some(3), ..cfg.clone() } } else { cfg.clone() };
            let r = run_suite(suite, &cfg).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = CheckConfig { cases: 4, exhaustive_n: 2, ..Default::default() };
        assert_eq!(run_suite(Suite::Tropical, &cfg).unwrap(), run_suite(Suite::Tropical, &cfg).unwrap());
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert!(run_suite(Suite::Ca, &CheckConfig { n: Some(0), ..Default::default() }).is_err());
    }
}
