//! Each command turns its input text into the full output text.

use std::fmt::Write;

use serde_json::{json, Value};
use toda_core::checks::{run_suite, CheckConfig, Suite};
use toda_core::grothendieck::verify_grothendieck_identity;
use toda_core::io::{
    parse_spectral_data, parse_toda_state, parse_ultra_state, rationals_json, toda_state_json, tropical_data_json,
    ultra_state_json,
};
use toda_core::lax::{bilinear_residuals, casorati_tau_grid, invariants, tau_to_ab, TauGauge};
use toda_core::numeric::{format_rational, int, parse_rational};
use toda_core::scatter::{scatter as run_scatter, CoeffChoice, ScatterOptions, ValuationMethod};
use toda_core::toda::trajectory;
use toda_core::tropical::{build_t_symbolic, t_grid, t_to_abu};
use toda_core::ultradiscrete::{ca_step, render_ascii, render_trajectory, ud_trajectory};
use toda_core::Rational;

use crate::{CliError, CliResult, Emit};

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn rational_arg(s: &str, what: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| CliError::Input(format!("--{what}: {e}")))
}

pub fn evolve(text: &str, steps: usize, with_invariants: bool, require_positive: bool) -> CliResult<String> {
    let s = parse_toda_state(text)?;
    if require_positive && !s.is_positive() {
        return Err(CliError::Input("state has a nonpositive entry".into()));
    }
    let traj = trajectory(&s, steps)?;
    let mut v = json!({ "trajectory": traj.iter().map(toda_state_json).collect::<Vec<_>>() });
    if with_invariants {
        v["invariants"] = traj.iter().map(|x| rationals_json(&invariants(x))).collect();
    }
    Ok(pretty(&v))
}

fn l_value(arg: Option<&str>, from_file: Option<Rational>) -> CliResult<Rational> {
    match arg {
        Some(s) => rational_arg(s, "L"),
        None => Ok(from_file.unwrap_or_else(|| int(1))),
    }
}

pub fn ud_evolve(text: &str, steps: usize, render: bool, l: Option<&str>, automaton: bool) -> CliResult<String> {
    let (s, file_l) = parse_ultra_state(text)?;
    let l = l_value(l, file_l)?;
    let traj = if automaton {
        let mut traj = vec![s];
        for _ in 0..steps {
            let next = ca_step(traj.last().expect("nonempty"))?;
            traj.push(next);
        }
        traj
    } else {
        ud_trajectory(&s, steps)?
    };
    if render {
        return Ok(render_trajectory(&traj, &l)?);
    }
    let states: Vec<Value> = traj.iter().map(|x| ultra_state_json(x, Some(&l))).collect();
    Ok(pretty(&json!({ "trajectory": states })))
}

pub fn tau(text: &str, t0: i64, t1: i64, gauge: TauGauge, with_states: bool) -> CliResult<String> {
    let sd = parse_spectral_data(text)?;
    if t1 < t0 {
        return Err(CliError::Input("--t1 must not be below --t0".into()));
    }
    let grid = casorati_tau_grid(&sd, t0, t1, gauge)?;
    let mut v = json!({
        "lambdas": rationals_json(&sd.lambdas),
        "fs": rationals_json(&sd.fs),
        "charpoly": rationals_json(sd.charpoly.coeffs()),
        "gauge": match gauge { TauGauge::Hirota => "hirota", TauGauge::Casorati => "casorati" },
        "t0": t0,
        "tau": grid.rows.iter().map(|r| rationals_json(r)).collect::<Vec<_>>(),
    });
    if gauge == TauGauge::Hirota && t1 > t0 {
        v["bilinear_exact"] = json!(bilinear_residuals(&grid).iter().all(|r| *r == int(0)));
    }
    if with_states {
        v["states"] = tau_to_ab(&grid)?.iter().map(toda_state_json).collect();
    }
    Ok(pretty(&v))
}

pub struct ScatterArgs {
    pub l: Option<String>,
    pub coeffs: CoeffChoice,
    pub q1: String,
    pub q2: String,
    pub precision: Option<usize>,
    pub emit: Emit,
    pub t0: i64,
    pub t1: Option<i64>,
}

fn joined(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

pub fn scatter(text: &str, args: &ScatterArgs) -> CliResult<String> {
    let (s, file_l) = parse_ultra_state(text)?;
    let l = match (&args.l, file_l) {
        (Some(x), _) => rational_arg(x, "L")?,
        (None, Some(x)) => x,
        (None, None) => return Err(CliError::Input("L missing: pass --L or put it in the state".into())),
    };
    let opts = ScatterOptions {
        coeffs: args.coeffs.clone(),
        q1: rational_arg(&args.q1, "q1")?,
        q2: rational_arg(&args.q2, "q2")?,
        precision: args.precision,
    };
    let n = s.n();
    let t0 = args.t0;
    let t1 = args.t1.unwrap_or(t0 + 2 * n as i64 + 3);
    if t1 < t0 {
        return Err(CliError::Input("--t1 must not be below --t0".into()));
    }
    let (sd, report) = run_scatter(&s, &l, &opts).map_err(|e| CliError::from(e).context("scatter"))?;

    let envelopes = || -> CliResult<String> {
        let mut out = String::new();
        for k in 1..=n + 1 {
            let env = build_t_symbolic(&sd, k).map_err(|e| CliError::from(e).context("envelopes"))?;
            writeln!(out, "T_{k}^t = {env}").expect("string write");
        }
        Ok(out)
    };
    let u_grid = || -> CliResult<String> {
        let grid = t_grid(&sd, t0, t1 + 1).map_err(|e| CliError::from(e).context("tau grid"))?;
        let abu = t_to_abu(&grid, &l).map_err(|e| CliError::from(e).context("U grid"))?;
        Ok(render_ascii(&abu.u, None))
    };

    Ok(match args.emit {
        Emit::T => envelopes()?,
        Emit::U => u_grid()?,
        Emit::Json => pretty(&tropical_data_json(&sd)),
        Emit::Report => {
            let lambdas: Vec<Rational> = report.lambdas.iter().map(|(v, _)| v.clone()).collect();
            let methods: Vec<&str> = report
                .lambdas
                .iter()
                .map(|(_, m)| match m {
                    ValuationMethod::NewtonPolygon => "newton",
                    ValuationMethod::Slope => "slope",
                })
                .collect();
            let slopes = |v: &[f64]| {
                v.iter().map(|&x| format!("{:.6}", if x.abs() < 5e-7 { 0.0 } else { x })).collect::<Vec<_>>().join(", ")
            };
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut out = String::new();
            writeln!(out, "Lambda = ({})", joined(&lambdas)).ok();
            writeln!(out, "F = ({})", joined(&sd.fs)).ok();
            writeln!(out, "L = {}", format_rational(&l)).ok();
            writeln!(out, "Lambda method: {}", methods.join(", ")).ok();
            writeln!(out, "Lambda slopes: {}", slopes(&report.lambda_slopes)).ok();
            writeln!(out, "F slopes: {}", slopes(&report.f_slopes)).ok();
            writeln!(
                out,
                "q = {}, {}; precision {} bits; retried: {}",
                format_rational(&report.q1),
                format_rational(&report.q2),
                report.precision,
                yes(report.retried)
            )
            .ok();
            writeln!(out, "genericity: {}; sign pattern: {}", yes(report.genericity_ok), yes(report.signs_ok)).ok();
            out.push('\n');
            out.push_str(&envelopes()?);
            writeln!(out, "\nU, t = {t0}..{t1}:").ok();
            out.push_str(&u_grid()?);
            out
        }
    })
}

pub fn grothendieck(n: usize, gamma: &str) -> CliResult<String> {
    let gamma = rational_arg(gamma, "gamma")?;
    Ok(verify_grothendieck_identity(n, &gamma)?.to_string())
}

pub fn check(
    names: &[String],
    seed: u64,
    n: Option<usize>,
    exhaustive_n: usize,
    cases: usize,
) -> CliResult<(String, usize)> {
    let suites: Vec<Suite> = if names.is_empty() {
        Suite::ALL.to_vec()
    } else {
        names.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let cfg = CheckConfig { seed, cases, n, exhaustive_n };
    let mut out = String::new();
    let mut failed = 0;
    for suite in suites {
        let report = run_suite(suite, &cfg)?;
        failed += usize::from(!report.passed());
        out.push_str(&report.to_string());
    }
    Ok((out, failed))
}
