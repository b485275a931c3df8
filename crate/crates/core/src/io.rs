//! JSON forms of states and spectral data. Rationals are written as `"p/q"`
//! strings; integers are also accepted as plain JSON numbers on input.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lax::SpectralData;
use crate::numeric::{format_rational, int, parse_rational, Rational};
use crate::toda::TodaState;
use crate::tropical::{Ext, TropicalSpectralData};
use crate::ultradiscrete::UltraState;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn rational(&self) -> Result<Rational> {
        match self {
            Num::Int(v) => Ok(int(*v)),
            Num::Text(s) => parse_rational(s),
        }
    }

    fn ext(&self) -> Result<Ext> {
        match self {
            Num::Int(v) => Ok(Ext::from_i64(*v)),
            Num::Text(s) => Ext::parse(s),
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn check_n(declared: Option<usize>, actual: usize, what: &str) -> Result<()> {
    match declared {
        Some(n) if n != actual => Err(Error::Parse(format!("{what}: N = {n} but {actual} sites given"))),
        _ => Ok(()),
    }
}

fn rationals(v: &[Num]) -> Result<Vec<Rational>> {
    v.iter().map(Num::rational).collect()
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

fn ext_json(v: &Ext) -> Value {
    match v {
        Ext::Finite(r) if r.is_integer() => {
            r.numer().try_into().map(|i: i64| json!(i)).unwrap_or_else(|_| rational_json(r))
        }
        other => Value::String(other.to_string()),
    }
}

pub fn exts_json(v: &[Ext]) -> Value {
    Value::Array(v.iter().map(ext_json).collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TodaStateFile {
    #[serde(rename = "N")]
    n: Option<usize>,
    a: Vec<Num>,
    b: Vec<Num>,
}

/// `{"N": 2, "a": ["1", "2"], "b": ["1"]}`
pub fn parse_toda_state(text: &str) -> Result<TodaState<Rational>> {
    let f: TodaStateFile = parse_json(text, "Toda state")?;
    check_n(f.n, f.a.len(), "Toda state")?;
    TodaState::new(rationals(&f.a)?, rationals(&f.b)?)
}

pub fn toda_state_json(s: &TodaState<Rational>) -> Value {
    json!({ "N": s.n(), "a": rationals_json(s.a()), "b": rationals_json(s.b()) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UltraStateFile {
    #[serde(rename = "N")]
    n: Option<usize>,
    #[serde(rename = "A")]
    a: Vec<Num>,
    #[serde(rename = "B")]
    b: Vec<Num>,
    #[serde(rename = "L")]
    l: Option<Num>,
}

/// `{"N": 8, "A": [1, ...], "B": [2, ..., "inf"], "L": "1"}`; `L` is optional.
pub fn parse_ultra_state(text: &str) -> Result<(UltraState, Option<Rational>)> {
    let f: UltraStateFile = parse_json(text, "ultradiscrete state")?;
    check_n(f.n, f.a.len(), "ultradiscrete state")?;
    let a = f.a.iter().map(Num::ext).collect::<Result<_>>()?;
    let b = f.b.iter().map(Num::ext).collect::<Result<_>>()?;
    let l = f.l.as_ref().map(Num::rational).transpose()?;
    Ok((UltraState::new(a, b)?, l))
}

pub fn ultra_state_json(s: &UltraState, l: Option<&Rational>) -> Value {
    let mut v = json!({ "N": s.n(), "A": exts_json(s.a()), "B": exts_json(s.b()) });
    if let Some(l) = l {
        v["L"] = rational_json(l);
    }
    v
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralFile {
    lambdas: Vec<Num>,
    fs: Vec<Num>,
}

/// `{"lambdas": ["3", "1/2"], "fs": ["-1", "2"]}`
pub fn parse_spectral_data(text: &str) -> Result<SpectralData<Rational>> {
    let f: SpectralFile = parse_json(text, "spectral data")?;
    SpectralData::from_roots(rationals(&f.lambdas)?, rationals(&f.fs)?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TropicalFile {
    #[serde(rename = "Lambda")]
    lambda: Vec<Value>,
    #[serde(rename = "F")]
    f: Vec<Value>,
    #[serde(rename = "L")]
    l: Value,
}

/// `{"Lambda": [0, 1], "F": [3, 2], "L": "1"}`; `Lambda` must be ascending.
pub fn parse_tropical_data(text: &str) -> Result<TropicalSpectralData> {
    let f: TropicalFile = parse_json(text, "tropical spectral data")?;
    let conv = |v: &Value| -> Result<Rational> {
        let n: Num = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        n.rational()
    };
    let lambda = f.lambda.iter().map(conv).collect::<Result<_>>()?;
    let fs = f.f.iter().map(conv).collect::<Result<_>>()?;
    TropicalSpectralData::new(lambda, fs, conv(&f.l)?)
}

pub fn tropical_data_json(sd: &TropicalSpectralData) -> Value {
    json!({ "Lambda": rationals_json(&sd.lambdas), "F": rationals_json(&sd.fs), "L": rational_json(&sd.l) })
}
