//! Tropical inverse scattering: lift an ultradiscrete state to a `q`-family of
//! discrete Toda states, read off the leading exponents of the spectral data,
//! and hand them to the tropical tau.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{arg_err, Error, Result};
use crate::lax::{char_poly, SpectralData};
use crate::numeric::rational::{nearest_small_rational, to_f64};
use crate::numeric::{int, rat, BigFloat, Poly, QPolynomial, Rational, Valuation};
use crate::toda::TodaState;
use crate::tropical::{Ext, TropicalSpectralData};
use crate::ultradiscrete::UltraState;

/// Positive coefficients `k_n` (for `a`) and `l_n` (for `b`) of the lift.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffChoice {
    /// `k_n = ((n − 1) mod 4) + 1`, `l_n = 1`.
    Example4,
    /// `k_n = n`, `l_n = 1`.
    Index,
    Explicit {
        k: Vec<Rational>,
        l: Vec<Rational>,
    },
}

impl CoeffChoice {
    fn resolve(&self, n: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
        let (k, l) = match self {
            CoeffChoice::Example4 => ((0..n).map(|i| int((i % 4) as i64 + 1)).collect(), vec![int(1); n - 1]),
            CoeffChoice::Index => ((1..=n).map(|i| int(i as i64)).collect(), vec![int(1); n - 1]),
            CoeffChoice::Explicit { k, l } => (k.clone(), l.clone()),
        };
        if k.len() != n || l.len() + 1 != n {
            return arg_err(format!("need {n} k and {} l coefficients", n - 1));
        }
        if k.iter().chain(&l).any(|c| !c.is_positive()) {
            return arg_err("embedding coefficients must be positive");
        }
        Ok((k, l))
    }
}

/// `a_n = k_n s^{d A_n}`, `b_n = l_n s^{d B_n}` (`b_n ≡ 0` for `B_n = +∞`),
/// where `s = q^{1/d}` and `d` clears the denominators of the exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct QEmbedding {
    k: Vec<Rational>,
    l: Vec<Rational>,
    scale: u64,
    a: Vec<QPolynomial>,
    b: Vec<QPolynomial>,
}

impl QEmbedding {
    pub fn a(&self) -> &[QPolynomial] {
        &self.a
    }

    pub fn b(&self) -> &[QPolynomial] {
        &self.b
    }

    pub fn coefficients(&self) -> (&[Rational], &[Rational]) {
        (&self.k, &self.l)
    }

    /// `d`: valuations in the embedding variable are `d` times the exponents.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn state(&self) -> TodaState<QPolynomial> {
        TodaState::new(self.a.clone(), self.b.clone()).expect("shape fixed at construction")
    }

    /// The discrete state at a value of the embedding variable.
    pub fn state_at(&self, s: &Rational) -> TodaState<Rational> {
        self.state().map(|p| p.eval(s))
    }
}

pub fn embed(s: &UltraState, coeffs: &CoeffChoice) -> Result<QEmbedding> {
    let n = s.n();
    let (k, l) = coeffs.resolve(n)?;
    let mut scale = 1u64;
    for (i, v) in s.a().iter().enumerate() {
        match v {
            Ext::Finite(r) if !r.is_negative() => {
                scale = scale
                    .lcm(&r.denom().try_into().map_err(|_| Error::Argument("exponent denominator too large".into()))?)
            }
            _ => return arg_err(format!("A_{} = {v}: the lift needs finite nonnegative A", i + 1)),
        }
    }
    for (i, v) in s.b().iter().enumerate() {
        match v {
            Ext::Finite(r) if !r.is_negative() => {
                scale = scale
                    .lcm(&r.denom().try_into().map_err(|_| Error::Argument("exponent denominator too large".into()))?)
            }
            Ext::PosInf => {}
            _ => return arg_err(format!("B_{} = {v}: the lift needs nonnegative B", i + 1)),
        }
    }
    let power = |c: &Rational, e: &Ext| -> Result<QPolynomial> {
        match e {
            Ext::PosInf => Ok(QPolynomial::zero()),
            Ext::Finite(r) => {
                let k = (r * int(scale as i64)).to_integer();
                let k: usize = k.try_into().map_err(|_| Error::Argument("exponent too large".into()))?;
                if k > 4096 {
                    return arg_err("exponent too large for the lift");
                }
                Ok(QPolynomial::monomial(c.clone(), k))
            }
            Ext::NegInf => unreachable!("rejected above"),
        }
    };
    let a = k.iter().zip(s.a()).map(|(c, e)| power(c, e)).collect::<Result<_>>()?;
    let b = l.iter().zip(s.b()).map(|(c, e)| power(c, e)).collect::<Result<_>>()?;
    Ok(QEmbedding { k, l, scale, a, b })
}

/// Characteristic polynomial of the lifted Lax matrix, coefficients in `ℚ[s]`.
pub fn char_poly_q(e: &QEmbedding) -> Poly<QPolynomial> {
    char_poly(&e.state())
}

/// Valuations of the roots from the lower convex hull of `(k, val(c_k))`:
/// a hull segment of slope `σ` and width `w` carries `w` roots of valuation `−σ`.
/// Ascending.
pub fn newton_polygon_valuations(f: &Poly<QPolynomial>) -> Result<Vec<Rational>> {
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return arg_err("Newton polygon needs degree >= 1"),
    };
    if f.coeff(deg).is_zero() {
        return arg_err("leading coefficient vanishes");
    }
    if f.coeff(0).is_zero() {
        return arg_err("zero is a root; its valuation is infinite");
    }
    let points: Vec<(i64, i64)> = (0..=deg)
        .filter_map(|k| match f.coeff(k).valuation() {
            Valuation::Finite(v) => Some((k as i64, v as i64)),
            Valuation::Infinite => None,
        })
        .collect();
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(deg);
    for w in hull.windows(2) {
        let width = w[1].0 - w[0].0;
        let val = rat(w[0].1 - w[1].1, width);
        out.extend(std::iter::repeat_n(val, width as usize));
    }
    out.sort();
    Ok(out)
}

fn log2_rational(q: &Rational) -> f64 {
    BigFloat::from_rational(q, 128).log2_abs()
}

/// Maximum distance from the rounded value that is still accepted.
pub const ROUNDING_TOLERANCE: f64 = 0.05;

/// Exponent `v` with `|g(q)| ~ c q^v`, from the two-point slope of `log|g|`,
/// rounded to a rational with denominator at most `max_den`.
/// Returns the rounded value and the raw slope.
pub fn estimate_valuation_from(
    g1: &BigFloat,
    g2: &BigFloat,
    q1: &Rational,
    q2: &Rational,
    max_den: u32,
) -> Result<(Rational, f64)> {
    if !(q2.is_positive() && q2 < q1 && *q1 < Rational::one()) {
        return arg_err("need 0 < q2 < q1 < 1");
    }
    if g1.is_zero() || g2.is_zero() {
        return Err(Error::Singular("valuation of a value that vanishes at a sample point".into()));
    }
    let slope = (g1.log2_abs() - g2.log2_abs()) / (log2_rational(q1) - log2_rational(q2));
    let (rounded, dist) = nearest_small_rational(slope, max_den);
    if dist > ROUNDING_TOLERANCE || !slope.is_finite() {
        return Err(Error::ValuationUncertain { slope });
    }
    Ok((rounded, slope))
}

/// [`estimate_valuation_from`] with an evaluator, denominator bound 4.
pub fn estimate_valuation(g: impl Fn(&Rational) -> BigFloat, q1: &Rational, q2: &Rational) -> Result<Rational> {
    estimate_valuation_from(&g(q1), &g(q2), q1, q2, 4).map(|(r, _)| r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationMethod {
    NewtonPolygon,
    Slope,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatterOptions {
    pub coeffs: CoeffChoice,
    pub q1: Rational,
    pub q2: Rational,
    /// Working precision in bits; `None` picks it from the data.
    pub precision: Option<usize>,
}

impl Default for ScatterOptions {
    fn default() -> Self {
        ScatterOptions { coeffs: CoeffChoice::Index, q1: rat(1, 1_000_000), q2: rat(1, 10_000_000), precision: None }
    }
}

/// How the spectral exponents were obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationReport {
    pub lambdas: Vec<(Rational, ValuationMethod)>,
    /// Raw two-point slopes of `|λ_i|`, for comparison with the Newton polygon.
    pub lambda_slopes: Vec<f64>,
    pub fs: Vec<(Rational, ValuationMethod)>,
    /// Raw slopes of `|f_i|` before rounding.
    pub f_slopes: Vec<f64>,
    /// Whether `val(λ_i − λ_j) = min[Λ_i, Λ_j]` for all pairs.
    pub genericity_ok: bool,
    /// Whether `(−1)^i f_i > 0` at both sample points.
    pub signs_ok: bool,
    pub q1: Rational,
    pub q2: Rational,
    pub precision: usize,
    pub retried: bool,
}

fn auto_precision(s: &UltraState, scale: u64, q2: &Rational) -> usize {
    let max_exp =
        s.a().iter().chain(s.b()).filter_map(|v| v.finite().map(to_f64)).fold(1.0f64, f64::max) * scale as f64;
    let bits = 64.0 + 4.0 * s.n() as f64 * max_exp * (-log2_rational(q2));
    bits.ceil() as usize
}

struct Sampled {
    lambda_slopes: Vec<f64>,
    fs: Vec<Rational>,
    f_slopes: Vec<f64>,
    genericity_ok: bool,
    signs_ok: bool,
}

fn sample(e: &QEmbedding, lambdas: &[Rational], q1: &Rational, q2: &Rational, precision: usize) -> Result<Sampled> {
    let (sd1, sd2) = rayon::join(
        || SpectralData::from_state(&e.state_at(q1), precision),
        || SpectralData::from_state(&e.state_at(q2), precision),
    );
    let (sd1, sd2) = (sd1?, sd2?);
    let n = lambdas.len();
    let d = int(e.scale() as i64);
    let max_den = 4.max(e.scale() as u32);
    let mut fs = Vec::with_capacity(n);
    let mut f_slopes = Vec::with_capacity(n);
    let mut lambda_slopes = Vec::with_capacity(n);
    for i in 0..n {
        let (_, raw) = estimate_valuation_from(&sd1.fs[i], &sd2.fs[i], q1, q2, max_den)?;
        let scaled = raw / e.scale() as f64;
        let (f, dist) = nearest_small_rational(scaled, max_den);
        if dist > ROUNDING_TOLERANCE {
            return Err(Error::ValuationUncertain { slope: scaled });
        }
        fs.push(f);
        f_slopes.push(scaled);
        let raw_l = (sd1.lambdas[i].log2_abs() - sd2.lambdas[i].log2_abs()) / (log2_rational(q1) - log2_rational(q2));
        lambda_slopes.push(raw_l / e.scale() as f64);
    }
    let mut genericity_ok = true;
    for i in 0..n {
        for j in i + 1..n {
            let g1 = &sd1.lambdas[i] - &sd1.lambdas[j];
            let g2 = &sd2.lambdas[i] - &sd2.lambdas[j];
            let want = (&lambdas[i]).min(&lambdas[j]) * &d;
            match estimate_valuation_from(&g1, &g2, q1, q2, max_den) {
                Ok((v, _)) if v == want => {}
                _ => genericity_ok = false,
            }
        }
    }
    let signs_ok = [&sd1, &sd2]
        .iter()
        .all(|sd| sd.fs.iter().enumerate().all(|(i, f)| if i % 2 == 0 { f.is_negative() } else { f.is_positive() }));
    Ok(Sampled { lambda_slopes, fs, f_slopes, genericity_ok, signs_ok })
}

/// The full pipeline: lift, Newton polygon for `Λ`, numeric roots and
/// `f_i = −det(λ_i Y − X)_{1,1}` at two sample points for `F`. Largest root
/// pairs with the smallest `Λ`. An uncertain slope triggers one retry with
/// both sample points divided by ten.
pub fn scatter(s: &UltraState, l: &Rational, opts: &ScatterOptions) -> Result<(TropicalSpectralData, ValuationReport)> {
    if !l.is_positive() {
        return arg_err("L must be positive");
    }
    let e = embed(s, &opts.coeffs)?;
    let d = int(e.scale() as i64);
    let lambdas: Vec<Rational> = newton_polygon_valuations(&char_poly_q(&e))?.into_iter().map(|v| v / &d).collect();
    let scaled_lambdas: Vec<Rational> = lambdas.iter().map(|v| v * &d).collect();
    let mut q1 = opts.q1.clone();
    let mut q2 = opts.q2.clone();
    let mut retried = false;
    let (sampled, precision) = loop {
        let precision = opts.precision.unwrap_or_else(|| auto_precision(s, e.scale(), &q2));
        match sample(&e, &scaled_lambdas, &q1, &q2, precision) {
            Ok(x) => break (x, precision),
            Err(Error::ValuationUncertain { .. }) if !retried => {
                retried = true;
                q1 /= int(10);
                q2 /= int(10);
            }
            Err(err) => return Err(err),
        }
    };
    let sd = TropicalSpectralData::new(lambdas.clone(), sampled.fs.clone(), l.clone())?;
    let report = ValuationReport {
        lambdas: lambdas.into_iter().map(|v| (v, ValuationMethod::NewtonPolygon)).collect(),
        lambda_slopes: sampled.lambda_slopes,
        fs: sampled.fs.into_iter().map(|v| (v, ValuationMethod::Slope)).collect(),
        f_slopes: sampled.f_slopes,
        genericity_ok: sampled.genericity_ok,
        signs_ok: sampled.signs_ok,
        q1,
        q2,
        precision,
        retried,
    };
    Ok((sd, report))
}

/// Data of the worked example: `N = 8`, `L = 1`.
pub fn example4_state() -> UltraState {
    UltraState::from_ints(&[1, 1, 1, 1, 0, 0, 0, 0], &[2, 2, 2, 4, 1, 1, 1]).expect("valid shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::invariants;
    use crate::tropical::{build_t_symbolic, t_grid, t_to_abu};
    use crate::ultradiscrete::ud_trajectory;
    use proptest::prelude::*;

    fn q(c: &[i64]) -> QPolynomial {
        QPolynomial::from_ints(c)
    }

    #[test]
    fn example_lift() {
        let e = embed(&example4_state(), &CoeffChoice::Example4).unwrap();
        let want_a = [q(&[0, 1]), q(&[0, 2]), q(&[0, 3]), q(&[0, 4]), q(&[1]), q(&[2]), q(&[3]), q(&[4])];
        let want_b =
            [q(&[0, 0, 1]), q(&[0, 0, 1]), q(&[0, 0, 1]), q(&[0, 0, 0, 0, 1]), q(&[0, 1]), q(&[0, 1]), q(&[0, 1])];
        assert_eq!(e.a(), &want_a);
        assert_eq!(e.b(), &want_b);
        assert_eq!(e.scale(), 1);
    }

    #[test]
    fn lift_edge_cases() {
        let s = UltraState::new(vec![Ext::from_i64(1), Ext::from_i64(0)], vec![Ext::PosInf]).unwrap();
        assert!(embed(&s, &CoeffChoice::Index).unwrap().b()[0].is_zero());
        let one = UltraState::from_ints(&[0], &[]).unwrap();
        assert_eq!(embed(&one, &CoeffChoice::Index).unwrap().a(), &[q(&[1])]);
        let bad = CoeffChoice::Explicit { k: vec![int(1), int(0)], l: vec![int(1)] };
        assert!(embed(&UltraState::from_ints(&[0, 0], &[1]).unwrap(), &bad).is_err());
        assert!(embed(&UltraState::from_ints(&[-1, 0], &[1]).unwrap(), &CoeffChoice::Index).is_err());
        let half = UltraState::new(vec![Ext::Finite(rat(1, 2)), Ext::from_i64(0)], vec![Ext::from_i64(1)]).unwrap();
        let e = embed(&half, &CoeffChoice::Index).unwrap();
        assert_eq!(e.scale(), 2);
        assert_eq!(e.a()[0], q(&[0, 1]));
        assert_eq!(e.b()[0], q(&[0, 0, 1]));
    }

    #[test]
    fn example_invariants() {
        let e = embed(&example4_state(), &CoeffChoice::Example4).unwrap();
        let inv = invariants(&e.state());
        assert_eq!(inv[0], q(&[10, 13, 3, 0, 1]));
        assert_eq!(inv[1], q(&[35, 115, 96, 24, 10, 8, 2]));
        assert_eq!(inv[2], q(&[50, 368, 605, 360, 102, 63, 41, 8]));
        assert_eq!(inv[7], q(&[0, 0, 0, 0, 576]));
        assert_eq!(char_poly_q(&e).coeff(0), q(&[0, 0, 0, 0, 576]));
    }

    #[test]
    fn newton_polygon_examples() {
        let e = embed(&example4_state(), &CoeffChoice::Example4).unwrap();
        let v = newton_polygon_valuations(&char_poly_q(&e)).unwrap();
        let want: Vec<Rational> = [0, 0, 0, 0, 1, 1, 1, 1].iter().map(|&x| int(x)).collect();
        assert_eq!(v, want);
        let lin = Poly::new(vec![QPolynomial::monomial(int(-3), 5), QPolynomial::one()]);
        assert_eq!(newton_polygon_valuations(&lin).unwrap(), vec![int(5)]);
        let zero_root = Poly::new(vec![QPolynomial::zero(), QPolynomial::one()]);
        assert!(newton_polygon_valuations(&zero_root).is_err());
        assert!(newton_polygon_valuations(&Poly::new(vec![QPolynomial::one()])).is_err());
    }

    #[test]
    fn slope_estimates() {
        let (q1, q2) = (rat(1, 1_000_000), rat(1, 100_000_000));
        let mono = |c: Rational, k: usize| {
            move |x: &Rational| BigFloat::from_rational(&(&c * crate::numeric::rational::powi(x, k as i64)), 512)
        };
        assert_eq!(estimate_valuation(mono(int(144), 3), &q1, &q2).unwrap(), int(3));
        assert_eq!(estimate_valuation(mono(rat(-32, 3), 13), &q1, &q2).unwrap(), int(13));
        // q^{5/2} at perfect squares
        let g = |x: &Rational| {
            let r = if *x == q1 { rat(1, 1_000) } else { rat(1, 10_000) };
            BigFloat::from_rational(&crate::numeric::rational::powi(&r, 5), 256)
        };
        assert_eq!(estimate_valuation(g, &q1, &q2).unwrap(), rat(5, 2));
        // slope 1.875 is 1/8 away from every rational with denominator <= 4
        let noisy = |x: &Rational| BigFloat::from_f64(if *x == rat(1, 10) { 1.0 } else { 10f64.powf(-1.875) }, 128);
        match estimate_valuation(noisy, &rat(1, 10), &rat(1, 100)) {
            Err(Error::ValuationUncertain { slope }) => assert!((slope - 1.875).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(estimate_valuation(mono(int(1), 1), &q2, &q1).is_err());
    }

    #[test]
    fn worked_example_pipeline() {
        let opts = ScatterOptions { coeffs: CoeffChoice::Example4, precision: Some(512), ..Default::default() };
        let (sd, report) = scatter(&example4_state(), &int(1), &opts).unwrap();
        let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(sd.lambdas, ints(&[0, 0, 0, 0, 1, 1, 1, 1]));
        assert_eq!(sd.fs, ints(&[13, 12, 11, 10, 6, 5, 4, 3]));
        assert!(report.f_slopes.iter().all(|s| (s - s.round()).abs() < 1e-3), "{:?}", report.f_slopes);
        assert!(report.genericity_ok && report.signs_ok && !report.retried);
        assert_eq!(build_t_symbolic(&sd, 2).unwrap().to_string(), "min[20, t+9]");
    }

    #[test]
    fn trivial_single_site() {
        let s = UltraState::from_ints(&[2], &[]).unwrap();
        let (sd, report) = scatter(&s, &int(1), &ScatterOptions::default()).unwrap();
        assert_eq!(sd.lambdas, vec![int(2)]);
        // f_1 = −θ_2 = −1
        assert_eq!(sd.fs, vec![int(0)]);
        assert!(report.genericity_ok);
        assert_eq!(build_t_symbolic(&sd, 1).unwrap().to_string(), "0");
        assert_eq!(build_t_symbolic(&sd, 2).unwrap().to_string(), "2t");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn newton_polygon_recovers_constructed_roots(ms in prop::collection::vec(0usize..4, 1..=5)) {
            let mut f = Poly::new(vec![QPolynomial::one()]);
            for (i, &m) in ms.iter().enumerate() {
                let root = QPolynomial::monomial(int(i as i64 + 1), m);
                f = &f * &Poly::new(vec![-root, QPolynomial::one()]);
            }
            let mut want: Vec<Rational> = ms.iter().map(|&m| int(m as i64)).collect();
            want.sort();
            let got = newton_polygon_valuations(&f).unwrap();
            prop_assert_eq!(got.len(), ms.len());
            prop_assert_eq!(got, want);
        }

        #[test]
        fn valuation_sum_is_product_valuation(a in prop::collection::vec(0i64..4, 1..=5), b in prop::collection::vec(0i64..4, 4)) {
            let n = a.len();
            let s = UltraState::from_ints(&a, &b[..n - 1]).unwrap();
            let e = embed(&s, &CoeffChoice::Index).unwrap();
            let f = char_poly_q(&e);
            let total: Rational = newton_polygon_valuations(&f).unwrap().into_iter().sum();
            let top = invariants(&e.state()).pop().unwrap();
            prop_assert_eq!(total, int(top.valuation().finite().unwrap() as i64));
        }

        #[test]
        fn scatter_round_trip(a in prop::collection::vec(0i64..4, 1..=5), b in prop::collection::vec(0i64..4, 4)) {
            let n = a.len();
            let s = UltraState::from_ints(&a, &b[..n - 1]).unwrap();
            let Ok((sd, report)) = scatter(&s, &int(1), &ScatterOptions::default()) else {
                return Err(TestCaseError::reject("uncertain valuations"));
            };
            prop_assume!(report.genericity_ok);
            let abu = t_to_abu(&t_grid(&sd, 0, 11).unwrap(), &int(1)).unwrap();
            let traj = ud_trajectory(&s, 10).unwrap();
            for (t, st) in traj.iter().enumerate() {
                prop_assert_eq!(&abu.a[t], st.a(), "A at t = {}", t);
                prop_assert_eq!(&abu.b[t], st.b(), "B at t = {}", t);
            }
        }
    }
}
