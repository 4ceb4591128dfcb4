//! Truncated Euler products, the main-term predictors and the
//! observed-versus-predicted comparison.
//!
//! Observed mean values always come from a [`ValueTable`]; nothing here sums
//! `f(n)` directly, so the two pipelines stay independent.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspec::{MultSpec, ValueTable};
use crate::primesums::{self, Params};
use crate::sieve::{largest_prime_factor, prime_divisors, PrimeTable};
use crate::special::{gamma, EULER_GAMMA};
use crate::sum::Neumaier;

/// Local factors below this modulus are treated as vanishing.
pub const VANISHING_FACTOR: f64 = 1e-14;

/// Primes per block in the parallel Euler product; fixed so the reduction
/// order never depends on the thread count.
const PRODUCT_BLOCK: usize = 4096;

/// Hard cap on the number of terms of a local series in `W_r(D)`.
const LOCAL_SERIES_MAX_TERMS: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaId {
    T1_6,
    T1_10,
    T1_13,
    T2_3,
    T4_5,
    L2_4,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::T1_6 => "T1_6",
            FormulaId::T1_10 => "T1_10",
            FormulaId::T1_13 => "T1_13",
            FormulaId::T2_3 => "T2_3",
            FormulaId::T4_5 => "T4_5",
            FormulaId::L2_4 => "L2_4",
        }
    }
}

impl std::str::FromStr for FormulaId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            FormulaId::T1_6,
            FormulaId::T1_10,
            FormulaId::T1_13,
            FormulaId::T2_3,
            FormulaId::T4_5,
            FormulaId::L2_4,
        ]
        .into_iter()
        .find(|f| f.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("unknown formula `{s}`"))
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Side quantities of the sifted predictor.
#[derive(Clone, Debug, PartialEq)]
pub struct SiftedTerms {
    /// `W_r(D)`.
    pub w: f64,
    pub chi: bool,
    /// `delta(b, A)` of the sifted estimate.
    pub delta: f64,
    /// Elliott's exponent.
    pub c: Option<f64>,
    /// Absolute error term of the new estimate: `M(x;r) (chi/W + (log x)^{-delta/2})`.
    pub error_new: f64,
    /// Absolute error term of Elliott's estimate:
    /// `M(x;r) (log_2 2D)^{1+A} / (log x)^c`, `None` outside its range.
    pub error_elliott: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub formula_id: FormulaId,
    pub main_term: Complex64,
    /// Computable part of the error term; the implicit constant is not included.
    pub error_budget: f64,
    pub x: u64,
    pub params: Params,
    pub sifted: Option<SiftedTerms>,
    /// Failed hypothesis checks, attached by the caller.
    pub warnings: Vec<String>,
}

/// `sum_{0 <= nu <= log x / log p} f(p^nu) / p^nu`.
pub fn local_factor(spec: &MultSpec, p: u64, x: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    if p > x {
        return acc;
    }
    let mut q = p;
    let mut nu = 1;
    let inv = 1.0 / p as f64;
    let mut w = inv;
    loop {
        acc += spec.value(p, nu) * w;
        match q.checked_mul(p) {
            Some(n) if n <= x => q = n,
            _ => break,
        }
        nu += 1;
        w *= inv;
    }
    acc
}

/// Log-magnitude and phase of a product, accumulated separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogProduct {
    pub log_modulus: f64,
    pub phase: f64,
}

impl LogProduct {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.log_modulus.exp(), self.phase)
    }
}

/// Product over `p in primes` of `factor(p)`, each factor required to have
/// modulus at least [`VANISHING_FACTOR`].
fn log_product<F>(primes: &[u64], factor: F) -> Result<LogProduct>
where
    F: Fn(u64) -> Result<Complex64> + Sync,
{
    let blocks: Vec<Result<(Neumaier, Neumaier)>> = primes
        .par_chunks(PRODUCT_BLOCK)
        .map(|chunk| {
            let mut m = Neumaier::default();
            let mut ph = Neumaier::default();
            for &p in chunk {
                let l = factor(p)?;
                m.add(l.norm().ln());
                ph.add(l.arg());
            }
            Ok((m, ph))
        })
        .collect();
    let mut m = Neumaier::default();
    let mut ph = Neumaier::default();
    for block in blocks {
        let (bm, bp) = block?;
        m.merge(&bm);
        ph.merge(&bp);
    }
    Ok(LogProduct { log_modulus: m.value(), phase: ph.value() })
}

fn checked_factor(spec: &MultSpec, p: u64, x: u64) -> Result<Complex64> {
    let l = local_factor(spec, p, x);
    if !(l.norm() >= VANISHING_FACTOR) {
        return Err(Error::NearVanishingFactor { p, modulus: l.norm() });
    }
    Ok(l)
}

fn primes_upto(primes: &PrimeTable, x: u64) -> Result<&[u64]> {
    if primes.bound() < x {
        return Err(Error::BoundMismatch { needed: x, have: primes.bound() });
    }
    Ok(primes.upto(x))
}

/// `prod_{p <= x} sum_{p^nu <= x} f(p^nu)/p^nu` in log space.
pub fn euler_product_log(spec: &MultSpec, x: u64, primes: &PrimeTable) -> Result<LogProduct> {
    let ps = primes_upto(primes, x)?;
    log_product(ps, |p| checked_factor(spec, p, x))
}

pub fn euler_product(spec: &MultSpec, x: u64, primes: &PrimeTable) -> Result<Complex64> {
    Ok(euler_product_log(spec, x, primes)?.value())
}

/// `min_{p <= x} |local_factor(spec, p, x)|`; `+inf` when there are no primes.
pub fn min_local_factor(spec: &MultSpec, x: u64, primes: &PrimeTable) -> Result<f64> {
    let ps = primes_upto(primes, x)?;
    Ok(ps
        .par_iter()
        .map(|&p| local_factor(spec, p, x).norm())
        .reduce(|| f64::INFINITY, f64::min))
}

/// `L_r(x; f) = prod_p local_factor(f)/local_factor(r)`.
pub fn ratio_product(f: &MultSpec, r: &MultSpec, x: u64, primes: &PrimeTable) -> Result<Complex64> {
    let ps = primes_upto(primes, x)?;
    Ok(log_product(ps, |p| {
        let lr = checked_factor(r, p, x)?;
        Ok(local_factor(f, p, x) / lr)
    })?
    .value())
}

/// `e^{-gamma rho} x / (Gamma(rho) log x)`.
fn mertens_scale(rho: f64, x: u64) -> f64 {
    let xf = x as f64;
    (-EULER_GAMMA * rho).exp() * xf / (gamma(rho) * xf.ln())
}

fn delta(params: &Params, f: &MultSpec) -> f64 {
    f.w() * params.delta1
}

/// Mertens-type main term:
/// `e^{-gamma rho} x / (Gamma(rho) log x) * prod_p sum_{p^nu <= x} f(p^nu)/p^nu`,
/// with budget `eps^delta e^{Re Z(x;f)}` times the same scale.
pub fn predict_1_6(f: &MultSpec, params: &Params, x: u64, primes: &PrimeTable) -> Result<Prediction> {
    if x < 2 {
        return Err(Error::Contract("predict: need x >= 2".into()));
    }
    let scale = mertens_scale(params.rho, x);
    let product = euler_product(f, x, primes)?;
    let z = primesums::prime_sum_z(x, f, primes)?;
    Ok(Prediction {
        formula_id: FormulaId::T1_6,
        main_term: product * scale,
        error_budget: params.eps.powf(delta(params, f)) * z.re.exp() * scale,
        x,
        params: params.clone(),
        sifted: None,
        warnings: Vec::new(),
    })
}

/// The same main term with the relative budget `eps^delta |main term|`.
pub fn predict_1_10(f: &MultSpec, params: &Params, x: u64, primes: &PrimeTable) -> Result<Prediction> {
    let mut p = predict_1_6(f, params, x, primes)?;
    p.formula_id = FormulaId::T1_10;
    p.error_budget = params.eps.powf(delta(params, f)) * p.main_term.norm();
    Ok(p)
}

/// Comparison main term `M(x; r) L_r(x; f)` with budget
/// `x eps^delta e^{Re Z(x;r)} / log x`. `m_r` is the observed `M(x; r)`.
pub fn predict_1_13(
    f: &MultSpec,
    r: &MultSpec,
    m_r: f64,
    params: &Params,
    x: u64,
    primes: &PrimeTable,
) -> Result<Prediction> {
    if m_r == 0.0 {
        return Err(Error::Contract("predict_1_13: M(x; r) vanishes".into()));
    }
    if x < 2 {
        return Err(Error::Contract("predict: need x >= 2".into()));
    }
    let main = if f == r {
        Complex64::new(m_r, 0.0)
    } else {
        ratio_product(f, r, x, primes)? * m_r
    };
    let z = primesums::prime_sum_z(x, r, primes)?;
    let xf = x as f64;
    Ok(Prediction {
        formula_id: FormulaId::T1_13,
        main_term: main,
        error_budget: xf * params.eps.powf(delta(params, f)) * z.re.exp() / xf.ln(),
        x,
        params: params.clone(),
        sifted: None,
        warnings: Vec::new(),
    })
}

/// Twisted comparison: `x^{i tau}/(1 + i tau)` times the comparison main term
/// of `f_tau = f n^{-i tau}`, budget `eps^delta M(x; r)`. At `tau = 0` the main
/// term is exactly that of [`predict_1_13`].
pub fn predict_2_3(
    f: &MultSpec,
    r: &MultSpec,
    tau: f64,
    m_r: f64,
    params: &Params,
    x: u64,
    primes: &PrimeTable,
) -> Result<Prediction> {
    let f_tau = MultSpec::twist(f, tau);
    let mut p = predict_1_13(&f_tau, r, m_r, params, x, primes)?;
    if tau != 0.0 {
        let i_tau = Complex64::new(0.0, tau);
        let xt = Complex64::from_polar(1.0, tau * (x as f64).ln());
        p.main_term = p.main_term * xt / (Complex64::new(1.0, 0.0) + i_tau);
    }
    p.formula_id = FormulaId::T2_3;
    p.error_budget = params.eps.powf(delta(params, f)) * m_r.abs();
    Ok(p)
}

/// `sum_{nu >= 0} r(p^nu)/p^nu`, stopped once two consecutive terms fall
/// below `1e-16` of the partial sum.
pub fn local_series(r: &MultSpec, p: u64) -> Result<f64> {
    let mut acc = Neumaier::default();
    acc.add(1.0);
    let inv = 1.0 / p as f64;
    let mut w = 1.0;
    let mut small = 0;
    let mut prev = f64::INFINITY;
    for nu in 1..=LOCAL_SERIES_MAX_TERMS {
        w *= inv;
        let term = r.value(p, nu).re * w;
        if !term.is_finite() || (nu > 64 && term.abs() > prev) {
            return Err(Error::Divergent { p });
        }
        acc.add(term);
        if term.abs() < 1e-16 * acc.value().abs() {
            small += 1;
            if small == 2 {
                return Ok(acc.value());
            }
        } else {
            small = 0;
        }
        prev = term.abs();
    }
    Err(Error::Divergent { p })
}

/// `W_r(D) = prod_{p | D} sum_{nu >= 0} r(p^nu)/p^nu`.
pub fn w_factor(r: &MultSpec, d: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Contract("D must be positive".into()));
    }
    let mut w = 1.0;
    for p in prime_divisors(d) {
        w *= local_series(r, p)?;
    }
    Ok(w)
}

/// Sifted main term `M(x; r) / W_r(D)` with both error terms.
///
/// `log_2 2D` is clamped at 0 in Elliott's term so that `D = 1` (where
/// `log log 2 < 0`) gives a vanishing rather than undefined term.
pub fn predict_4_5(
    r: &MultSpec,
    d: u64,
    m_r: f64,
    params: &Params,
    x: u64,
) -> Result<Prediction> {
    if d == 0 {
        return Err(Error::Contract("D must be positive".into()));
    }
    if largest_prime_factor(d) > x {
        return Err(Error::Contract(format!("P+(D) = {} exceeds x = {x}", largest_prime_factor(d))));
    }
    if x < 3 {
        return Err(Error::Contract("predict_4_5: need x >= 3".into()));
    }
    let w = w_factor(r, d)?;
    let (b, a) = (params.b, params.big_a);
    let log_x = (x as f64).ln();
    let loglog_3d = (3.0 * d as f64).ln().ln();
    let chi = loglog_3d > log_x.powf(b.powi(3) / (17.0 * a.powi(3)));
    let delta = primesums::delta_sifted(b, a);
    let error_new = m_r.abs() * (if chi { 1.0 / w } else { 0.0 } + log_x.powf(-delta / 2.0));
    let c = primesums::c_elliott(b, a).ok();
    let error_elliott = c.map(|c| {
        let l = (2.0 * d as f64).ln().ln().max(0.0);
        m_r.abs() * l.powf(1.0 + a) / log_x.powf(c)
    });
    Ok(Prediction {
        formula_id: FormulaId::T4_5,
        main_term: Complex64::new(m_r / w, 0.0),
        error_budget: error_new,
        x,
        params: params.clone(),
        sifted: Some(SiftedTerms { w, chi, delta, c, error_new, error_elliott }),
        warnings: Vec::new(),
    })
}

/// Order of magnitude `z e^{Re Z(z; r)} / log z` of `M(z; r)` for non-negative
/// `r`. The relation is only up to constants, so the budget is the main term
/// itself and the comparison's `rel_err` reads as a ratio deviation.
pub fn predict_l2_4(r: &MultSpec, params: &Params, z: u64, primes: &PrimeTable) -> Result<Prediction> {
    if z < 2 {
        return Err(Error::Contract("predict: need x >= 2".into()));
    }
    let zs = primesums::prime_sum_z(z, r, primes)?;
    let zf = z as f64;
    let main = zf * zs.re.exp() / zf.ln();
    Ok(Prediction {
        formula_id: FormulaId::L2_4,
        main_term: Complex64::new(main, 0.0),
        error_budget: main,
        x: z,
        params: params.clone(),
        sifted: None,
        warnings: Vec::new(),
    })
}

/// `M(z; r) log z / (z e^{Re Z(z; r)})` over a geometric grid in `(x^{2 eps1}, x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaRatios {
    pub points: Vec<(u64, f64)>,
    pub min: f64,
    pub max: f64,
}

pub fn lemma_2_2_ratio(
    r: &MultSpec,
    params: &Params,
    x: u64,
    grid_size: usize,
    table: &ValueTable,
    primes: &PrimeTable,
) -> Result<LemmaRatios> {
    if table.bound() < x {
        return Err(Error::BoundMismatch { needed: x, have: table.bound() });
    }
    let ps = primes_upto(primes, x)?;
    let log_x = (x as f64).ln();
    let lower = 2.0 * params.eps1 * log_x;
    if grid_size == 0 || lower >= log_x {
        return Err(Error::Range(format!(
            "empty z-grid (x^{{2 eps1}}, x] for x = {x}, eps1 = {}",
            params.eps1
        )));
    }
    let mut zs: Vec<u64> = (1..=grid_size)
        .map(|i| {
            let t = lower + (log_x - lower) * i as f64 / grid_size as f64;
            if i == grid_size { x } else { t.exp().floor() as u64 }
        })
        .filter(|&z| z as f64 > lower.exp() && z >= 2)
        .collect();
    zs.dedup();
    if zs.is_empty() {
        return Err(Error::Range(format!("empty z-grid for x = {x}")));
    }
    let mut acc = Neumaier::default();
    let mut i = 0;
    let mut points = Vec::with_capacity(zs.len());
    for &z in &zs {
        while i < ps.len() && ps[i] <= z {
            acc.add(r.value(ps[i], 1).re / ps[i] as f64);
            i += 1;
        }
        let m = table.summatory(z)?.re;
        let zf = z as f64;
        points.push((z, m * zf.ln() / (zf * acc.value().exp())));
    }
    let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(LemmaRatios { points, min, max })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub formula_id: FormulaId,
    pub x: u64,
    pub observed: Complex64,
    pub predicted: Complex64,
    pub abs_err: f64,
    /// `abs_err / |observed|`, `+inf` when nothing was observed.
    pub rel_err: f64,
    /// `abs_err / error_budget`.
    pub budget_ratio: f64,
}

impl Comparison {
    pub const CSV_HEADER: &'static str =
        "formula_id,x,observed_re,observed_im,predicted_re,predicted_im,abs_err,rel_err,budget_ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.formula_id,
            self.x,
            self.observed.re,
            self.observed.im,
            self.predicted.re,
            self.predicted.im,
            self.abs_err,
            self.rel_err,
            self.budget_ratio
        )
    }
}

pub fn compare(observed: Complex64, prediction: &Prediction) -> Comparison {
    let abs_err = (observed - prediction.main_term).norm();
    let rel_err = if observed == Complex64::new(0.0, 0.0) {
        f64::INFINITY
    } else {
        abs_err / observed.norm()
    };
    let budget_ratio = if abs_err == 0.0 {
        0.0
    } else if prediction.error_budget > 0.0 {
        abs_err / prediction.error_budget
    } else {
        f64::INFINITY
    };
    Comparison {
        formula_id: prediction.formula_id,
        x: prediction.x,
        observed,
        predicted: prediction.main_term,
        abs_err,
        rel_err,
        budget_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::eval_mult;
    use crate::sieve::{build_primes, build_spf};

    fn alternating() -> MultSpec {
        MultSpec::custom("alt", true, false, |_, nu| {
            Complex64::from(if nu % 2 == 0 { 1.0 } else { -1.0 })
        })
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn local_factor_examples() {
        assert_eq!(local_factor(&MultSpec::one(), 2, 10), Complex64::new(1.875, 0.0));
        let f = MultSpec::divisor(0.3).unwrap();
        let l = local_factor(&f, 7, 7);
        assert!((l - (Complex64::new(1.0, 0.0) + f.value(7, 1) / 7.0)).norm() < 1e-16);
        assert_eq!(local_factor(&alternating(), 2, 4).re, 0.75);
    }

    #[test]
    fn euler_product_examples() {
        let primes = build_primes(100);
        let one = euler_product(&MultSpec::one(), 10, &primes).unwrap();
        let want = 1.875 * (13.0 / 9.0) * 1.2 * (8.0 / 7.0);
        assert!(close(one.re, want, 1e-13) && one.im.abs() < 1e-15);
        assert!(close(one.re, 3.714_286, 1e-6));
        let sf = euler_product(&MultSpec::squarefree(), 10, &primes).unwrap();
        assert!(close(sf.re, 1.5 * (4.0 / 3.0) * 1.2 * (8.0 / 7.0), 1e-13));
        assert_eq!(euler_product(&MultSpec::one(), 1, &primes).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn euler_product_matches_sequential_multiplication() {
        let primes = build_primes(10_000);
        let specs = [
            MultSpec::one(),
            MultSpec::divisor(0.7).unwrap(),
            MultSpec::omega_exp(Complex64::new(0.3, 0.8)).unwrap(),
            MultSpec::twist(&MultSpec::squarefree(), 1.5),
        ];
        for spec in &specs {
            for x in [10, 997, 5000, 10_000] {
                let mut direct = Complex64::new(1.0, 0.0);
                for &p in primes.upto(x) {
                    direct *= local_factor(spec, p, x);
                }
                let got = euler_product(spec, x, &primes).unwrap();
                assert!((got - direct).norm() <= 1e-10 * direct.norm(), "{spec} at {x}");
            }
        }
    }

    #[test]
    fn vanishing_factor_is_reported() {
        let primes = build_primes(10);
        let f = MultSpec::custom("kill2", true, false, |p, _| {
            Complex64::from(if p == 2 { -2.0 } else { 0.0 })
        });
        match euler_product(&f, 2, &primes) {
            Err(Error::NearVanishingFactor { p, .. }) => assert_eq!(p, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn min_local_factor_examples() {
        let primes = build_primes(100);
        let m = min_local_factor(&MultSpec::squarefree(), 10, &primes).unwrap();
        assert!(close(m, 8.0 / 7.0, 1e-15));
        let m = min_local_factor(&alternating(), 4, &primes).unwrap();
        assert!(close(m, 2.0 / 3.0, 1e-15));
        assert!(min_local_factor(&MultSpec::one(), 100, &primes).unwrap() >= 1.0);
    }

    #[test]
    fn mertens_type_small_example() {
        let primes = build_primes(100);
        let p = Params::defaults(10);
        let pred = predict_1_6(&MultSpec::one(), &p, 10, &primes).unwrap();
        let want = (-EULER_GAMMA).exp() * 10.0 / 10f64.ln() * 3.714_285_714_285_714;
        assert!(close(pred.main_term.re, want, 1e-12));
        assert!(close(pred.main_term.re, 9.057, 1e-3));
        assert!(pred.error_budget >= 0.0);
        assert!(close(gamma(0.5), std::f64::consts::PI.sqrt(), 1e-12));
    }

    #[test]
    fn comparison_examples() {
        let primes = build_primes(100);
        let p = Params::defaults(10);
        let one = MultSpec::one();
        let pred = predict_1_13(&one, &one, 10.0, &p, 10, &primes).unwrap();
        assert_eq!(pred.main_term, Complex64::new(10.0, 0.0));
        let pred = predict_1_13(&MultSpec::squarefree(), &one, 10.0, &p, 10, &primes).unwrap();
        assert!(close(pred.main_term.re, 10.0 * 2.742_857_142_857_143 / 3.714_285_714_285_714, 1e-12));
        let c = compare(Complex64::new(7.0, 0.0), &pred);
        assert!(close(c.rel_err, 0.055, 0.01));
        assert!(close(c.abs_err, (7.0 - pred.main_term.re).abs(), 1e-15));
    }

    #[test]
    fn twisted_reduces_at_zero() {
        let primes = build_primes(1000);
        let p = Params::defaults(1000);
        let f = MultSpec::divisor(0.6).unwrap();
        let r = MultSpec::one();
        let a = predict_1_13(&f, &r, 1000.0, &p, 1000, &primes).unwrap();
        let b = predict_2_3(&f, &r, 0.0, 1000.0, &p, 1000, &primes).unwrap();
        assert_eq!(a.main_term.re.to_bits(), b.main_term.re.to_bits());
        assert_eq!(a.main_term.im.to_bits(), b.main_term.im.to_bits());
    }

    #[test]
    fn twisted_conjugation_symmetry() {
        let primes = build_primes(5000);
        let p = Params::defaults(5000);
        let z = Complex64::new(0.4, 0.3);
        let f = MultSpec::omega_exp(z).unwrap();
        let fc = MultSpec::omega_exp(z.conj()).unwrap();
        let r = MultSpec::one();
        let a = predict_2_3(&f, &r, 1.3, 5000.0, &p, 5000, &primes).unwrap();
        let b = predict_2_3(&fc, &r, -1.3, 5000.0, &p, 5000, &primes).unwrap();
        assert!(close(a.main_term.norm(), b.main_term.norm(), 1e-12));
    }

    #[test]
    fn sifted_examples() {
        let p = Params::defaults(30);
        let one = MultSpec::one();
        assert_eq!(w_factor(&one, 1).unwrap(), 1.0);
        let pred = predict_4_5(&one, 1, 30.0, &p, 30).unwrap();
        assert_eq!(pred.main_term.re, 30.0);
        let pred = predict_4_5(&one, 6, 30.0, &p, 30).unwrap();
        assert!(close(pred.sifted.as_ref().unwrap().w, 3.0, 1e-15));
        assert!(close(pred.main_term.re, 10.0, 1e-15));
        // Direct count of n <= 30 coprime to 6.
        assert_eq!((1..=30u64).filter(|n| n % 2 != 0 && n % 3 != 0).count(), 10);
        assert!(matches!(predict_4_5(&one, 31, 30.0, &p, 30), Err(Error::Contract(_))));
    }

    #[test]
    fn w_factor_for_one_is_mertens_product() {
        for d in [2u64, 6, 30, 30030, 9_699_690, 1_000_000_007] {
            let want: f64 = prime_divisors(d).iter().map(|&p| 1.0 / (1.0 - 1.0 / p as f64)).product();
            assert!(close(w_factor(&MultSpec::one(), d).unwrap(), want, 1e-12), "D = {d}");
        }
    }

    #[test]
    fn divergent_local_series() {
        let grow = MultSpec::custom("grow", true, true, |p, nu| {
            Complex64::from((p as f64).powi(nu as i32 + 1))
        });
        assert!(matches!(local_series(&grow, 3), Err(Error::Divergent { p: 3 })));
    }

    #[test]
    fn ratio_is_at_most_one_for_dominated_pairs() {
        let primes = build_primes(2000);
        let f = MultSpec::divisor(0.4).unwrap();
        let r = MultSpec::divisor(0.9).unwrap();
        for &p in primes.upto(2000) {
            let q = local_factor(&f, p, 2000) / local_factor(&r, p, 2000);
            assert!(q.norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn lemma_ratios_positive() {
        let x = 100_000;
        let primes = build_primes(x);
        let table = eval_mult(&MultSpec::one(), x, &build_spf(x).unwrap()).unwrap();
        let p = Params::defaults(x).with_eps(0.02);
        let res = lemma_2_2_ratio(&MultSpec::one(), &p, x, 16, &table, &primes).unwrap();
        assert!(res.min > 0.0 && res.max / res.min <= 1.5, "{res:?}");
        let p = Params::defaults(1_000_000);
        assert!(matches!(
            lemma_2_2_ratio(&MultSpec::one(), &p, x, 16, &table, &primes),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn compare_guards() {
        let primes = build_primes(100);
        let p = Params::defaults(10);
        let pred = predict_1_6(&MultSpec::one(), &p, 10, &primes).unwrap();
        let c = compare(pred.main_term, &pred);
        assert_eq!(c.rel_err, 0.0);
        let c = compare(Complex64::new(0.0, 0.0), &pred);
        assert!(c.rel_err.is_infinite() && c.abs_err.is_finite());
    }
}
