//! Prime sums, the parameter bundle, the derived constants and the automated
//! hypothesis checks.
//!
//! Conditions stated with an explicit constant are decided exactly. Conditions
//! stated only up to an implicit constant (`<<`) are measured: the report
//! carries the supremum of LHS/RHS over a geometric `y`-grid and `holds` compares
//! it against [`Params::threshold`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::{AddSpec, MultSpec};
use crate::sieve::PrimeTable;
use crate::sum::{Neumaier, NeumaierC};

/// Number of points in every `y`-grid.
pub const GRID_POINTS: usize = 64;

/// Default cut-off for measured implicit constants.
pub const DEFAULT_THRESHOLD: f64 = 10.0;

/// Floor for the default `eps = max(1/sqrt(log x), floor)`.
pub const DEFAULT_EPS_FLOOR: f64 = 0.02;

/// How the exponent of the twisted condition used inside the proof of the
/// twisted comparison theorem is read: the surrounding argument uses `h`, the
/// printed display shows `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistedExponent {
    #[default]
    H,
    B,
}

/// The parameter bundle governing every hypothesis check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
    pub rho: f64,
    pub eps: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub delta1: f64,
    pub tau: f64,
    pub h: f64,
    pub eta_x: f64,
    pub threshold: f64,
    #[serde(default)]
    pub twisted_exponent: TwistedExponent,
}

impl Params {
    /// Documented defaults at scale `x`: `b = 0.2`, `a = 0.1`, `A = 1`, `B = 2.1`,
    /// `rho = 1`, `eps = max(1/sqrt(log x), 0.02)` (capped at 1/2) and the largest
    /// admissible `delta1 = (2/3) beta b`.
    pub fn defaults(x: u64) -> Self {
        let log_x = (x.max(3) as f64).ln();
        let eps = (1.0 / log_x.sqrt()).max(DEFAULT_EPS_FLOOR).min(0.5);
        let mut p = Params {
            a: 0.1,
            b: 0.2,
            big_a: 1.0,
            big_b: 2.1,
            rho: 1.0,
            eps,
            eps1: 0.0,
            eps2: 0.0,
            delta1: 0.0,
            tau: 0.0,
            h: 0.0,
            eta_x: log_x.powf(-0.25),
            threshold: DEFAULT_THRESHOLD,
            twisted_exponent: TwistedExponent::H,
        };
        p.derive();
        p.delta1 = 2.0 / 3.0 * beta(p.rho, p.big_a) * p.b;
        p
    }

    /// Recompute `eps1 = sqrt(eps)`, `eps2 = eps eps1` and `h = (1 - b)/(min(1, rho) - b)`.
    pub fn derive(&mut self) {
        self.eps1 = self.eps.sqrt();
        self.eps2 = self.eps * self.eps1;
        self.h = h_theorem_1_1(self.b, self.rho);
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self.derive();
        self
    }

    /// Set `eta_x = (log x)^{-1/4}`.
    pub fn at_scale(mut self, x: u64) -> Self {
        self.eta_x = (x as f64).ln().powf(-0.25);
        self
    }

    fn check_common(&self) -> Result<()> {
        let finite = [self.a, self.b, self.big_a, self.big_b, self.rho, self.eps, self.delta1]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Contract("parameters must be finite".into()));
        }
        if !(self.b > 0.0 && self.big_a > 0.0 && self.rho > 0.0 && self.delta1 > 0.0) {
            return Err(Error::Contract(format!(
                "need b, A, rho, delta1 > 0 (b = {}, A = {}, rho = {}, delta1 = {})",
                self.b, self.big_a, self.rho, self.delta1
            )));
        }
        Ok(())
    }

    fn check_eps(&self, x: u64) -> Result<()> {
        let lower = 1.0 / (x as f64).ln().sqrt();
        if !(self.eps >= lower && self.eps <= 0.5) {
            return Err(Error::Contract(format!(
                "eps = {} outside [1/sqrt(log x), 1/2] = [{lower}, 0.5]",
                self.eps
            )));
        }
        Ok(())
    }

    /// Ranges of the Mertens-type theorem: `a in (0, 1/2]`, `b in [a, 1)`,
    /// `A >= 2b`, `B > 0`, `x >= e^4`, `eps in [1/sqrt(log x), 1/2]`,
    /// `rho in [2b, A]`, `delta1 in (0, (2/3) beta b]`.
    pub fn validate_theorem_1_1(&self, x: u64) -> Result<()> {
        self.check_common()?;
        self.check_eps(x)?;
        let ok = self.a > 0.0
            && self.a <= 0.5
            && self.b >= self.a
            && self.b < 1.0
            && self.big_a >= 2.0 * self.b
            && self.big_b > 0.0
            && (x as f64).ln() >= 4.0
            && self.rho >= 2.0 * self.b
            && self.rho <= self.big_a
            && self.delta1 <= 2.0 / 3.0 * beta(self.rho, self.big_a) * self.b * (1.0 + 1e-12);
        if ok {
            Ok(())
        } else {
            Err(Error::Contract(format!("parameters outside the Mertens-type ranges: {self:?}")))
        }
    }

    /// Ranges of the comparison theorems: `a in (0, 1/4]`, `b in [a, 1/2)`,
    /// `A >= 2b`, `B > 0`, `x >= e^4`, `eps in [1/sqrt(log x), 1/2]`,
    /// `delta1 in (0, delta0(b)]`.
    pub fn validate_theorem_1_2(&self, x: u64) -> Result<()> {
        self.check_common()?;
        self.check_eps(x)?;
        let ok = self.a > 0.0
            && self.a <= 0.25
            && self.b >= self.a
            && self.b < 0.5
            && self.big_a >= 2.0 * self.b
            && self.big_b > 0.0
            && (x as f64).ln() >= 4.0
            && self.delta1 <= delta0(self.b, self.big_a) * (1.0 + 1e-12);
        if ok {
            Ok(())
        } else {
            Err(Error::Contract(format!("parameters outside the comparison ranges: {self:?}")))
        }
    }
}

/// `beta = 1 - sin(p)/p` with `p = pi rho / A`.
pub fn beta(rho: f64, big_a: f64) -> f64 {
    sinc_gap(PI * rho / big_a)
}

/// `beta0(b, A) = 1 - sin(2 pi b / A) / (2 pi b / A)`.
pub fn beta0(b: f64, big_a: f64) -> f64 {
    sinc_gap(2.0 * PI * b / big_a)
}

/// `delta0(b, A) = b beta0 / 3`.
pub fn delta0(b: f64, big_a: f64) -> f64 {
    b * beta0(b, big_a) / 3.0
}

/// `delta(b, A) = b beta(b, A) / 12` with `beta(b, A) = 1 - sin(pi b/A)/(pi b/A)`.
pub fn delta_sifted(b: f64, big_a: f64) -> f64 {
    b * sinc_gap(PI * b / big_a) / 12.0
}

/// Elliott's exponent `c = b^3 / (b^2 + 3456 A^2)`, stated for `b <= 12 sqrt(2A)`.
pub fn c_elliott(b: f64, big_a: f64) -> Result<f64> {
    if !(b > 0.0 && big_a > 0.0) || b > 12.0 * (2.0 * big_a).sqrt() {
        return Err(Error::Contract(format!("c_elliott: need 0 < b <= 12 sqrt(2A), got b = {b}, A = {big_a}")));
    }
    Ok(b.powi(3) / (b * b + 3456.0 * big_a * big_a))
}

/// `h = (1 - b) / (min(1, rho) - b)`.
pub fn h_theorem_1_1(b: f64, rho: f64) -> f64 {
    (1.0 - b) / (rho.min(1.0) - b)
}

/// `h = (1 - b) / b`.
pub fn h_theorem_1_2(b: f64) -> f64 {
    (1.0 - b) / b
}

fn sinc_gap(p: f64) -> f64 {
    1.0 - p.sin() / p
}

/// Every derived constant at once.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub beta: f64,
    pub beta0: f64,
    pub delta0: f64,
    /// `delta = w_f delta1`.
    pub delta_thm: f64,
    pub h: f64,
    pub w_f: f64,
    pub delta_4_3: f64,
    pub c_4_2: f64,
}

pub fn constants(params: &Params, f_is_real: bool) -> Result<Constants> {
    params.check_common()?;
    let w_f = if f_is_real { 1.0 } else { 0.5 };
    Ok(Constants {
        beta: beta(params.rho, params.big_a),
        beta0: beta0(params.b, params.big_a),
        delta0: delta0(params.b, params.big_a),
        delta_thm: w_f * params.delta1,
        h: h_theorem_1_1(params.b, params.rho),
        w_f,
        delta_4_3: delta_sifted(params.b, params.big_a),
        c_4_2: c_elliott(params.b, params.big_a)?,
    })
}

/// `Z(x; f) = sum_{p <= x} f(p) / p`.
pub fn prime_sum_z(x: u64, spec: &MultSpec, primes: &PrimeTable) -> Result<Complex64> {
    if primes.bound() < x {
        return Err(Error::BoundMismatch { needed: x, have: primes.bound() });
    }
    let mut acc = NeumaierC::default();
    for &p in primes.upto(x) {
        acc.add(spec.value(p, 1) / p as f64);
    }
    Ok(acc.value())
}

/// `E_h(x; r)`, `D_h(x; r)`, `mu_x` and `theta_x = mu_x + 1/D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdditiveStats {
    pub e: f64,
    pub d: f64,
    pub mu: f64,
    pub theta: f64,
}

pub fn additive_stats(
    x: u64,
    h: &AddSpec,
    r: &MultSpec,
    primes: &PrimeTable,
) -> Result<AdditiveStats> {
    if primes.bound() < x {
        return Err(Error::BoundMismatch { needed: x, have: primes.bound() });
    }
    let mut e = Neumaier::default();
    let mut d2 = Neumaier::default();
    let mut max_h = 0.0f64;
    for &p in primes.upto(x) {
        let hp = h.value(p, 1);
        let w = r.value(p, 1).re / p as f64;
        e.add(w * hp);
        d2.add(w * hp * hp);
        max_h = max_h.max(hp.abs());
    }
    let d = d2.value().max(0.0).sqrt();
    if d == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let mu = max_h / d;
    Ok(AdditiveStats { e: e.value(), d, mu, theta: mu + 1.0 / d })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    C1_3,
    C1_4,
    C1_5,
    C1_7,
    C1_8,
    C1_12,
    C4_4,
    #[allow(non_camel_case_types)]
    C3_1_iv,
    #[serde(rename = "CLASS_M")]
    ClassM,
}

impl ConditionId {
    pub const ALL: [ConditionId; 9] = [
        ConditionId::ClassM,
        ConditionId::C1_3,
        ConditionId::C1_4,
        ConditionId::C1_5,
        ConditionId::C1_7,
        ConditionId::C1_8,
        ConditionId::C1_12,
        ConditionId::C4_4,
        ConditionId::C3_1_iv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::C1_3 => "C1_3",
            ConditionId::C1_4 => "C1_4",
            ConditionId::C1_5 => "C1_5",
            ConditionId::C1_7 => "C1_7",
            ConditionId::C1_8 => "C1_8",
            ConditionId::C1_12 => "C1_12",
            ConditionId::C4_4 => "C4_4",
            ConditionId::C3_1_iv => "C3_1_iv",
            ConditionId::ClassM => "CLASS_M",
        }
    }

    /// Lower-bound conditions report the infimum of LHS/RHS instead of the supremum.
    pub fn is_lower_bound(self) -> bool {
        matches!(self, ConditionId::C1_12 | ConditionId::C4_4)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one hypothesis check.
///
/// `measured_constant` is the supremum of LHS/RHS over the grid (for upper
/// bounds) or its infimum (for the lower bounds `C1_12`, `C4_4`, which hold iff
/// it is at least 1). `lhs` and `rhs` are taken at `worst_y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition_id: ConditionId,
    pub holds: bool,
    pub measured_constant: f64,
    pub y_grid: Vec<f64>,
    pub worst_y: u64,
    pub lhs: f64,
    pub rhs: f64,
}

impl ConditionReport {
    pub const CSV_HEADER: &'static str = "condition_id,holds,measured_constant,worst_y";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.condition_id, self.holds, self.measured_constant, self.worst_y
        )
    }
}

/// Geometric grid of `GRID_POINTS` points in `(x^eps, x]`, floored to integers.
pub fn upper_grid(x: u64, eps: f64) -> Result<Vec<f64>> {
    let log_x = (x as f64).ln();
    let lower = (eps * log_x).exp();
    let mut grid: Vec<f64> = (1..GRID_POINTS)
        .map(|i| (log_x * (eps + (1.0 - eps) * i as f64 / GRID_POINTS as f64)).exp().floor())
        .map(|y| y.min(x as f64))
        .chain(std::iter::once(x as f64))
        .filter(|&y| y > lower && y >= 2.0)
        .collect();
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::Range(format!("empty y-grid in (x^eps, x] for x = {x}, eps = {eps}")));
    }
    Ok(grid)
}

/// Geometric grid of `GRID_POINTS` points in `[lo, hi]`.
pub fn closed_grid(lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo > 1.0 && lo <= hi) {
        return Err(Error::Range(format!("empty y-grid [{lo}, {hi}]")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| (a + (b - a) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect();
    grid.dedup();
    Ok(grid)
}

/// `max_p |f(p)| <= A` and the prime-power sum `sum_{p^nu <= x, nu >= 2}
/// |f(p^nu)| log p^nu / p^nu <= B`. `lhs` carries the truncated sum.
pub fn class_membership(
    spec: &MultSpec,
    big_a: f64,
    big_b: f64,
    x: u64,
    primes: &PrimeTable,
) -> Result<ConditionReport> {
    if primes.bound() < x {
        return Err(Error::BoundMismatch { needed: x, have: primes.bound() });
    }
    Ok(class_membership_on(spec, big_a, big_b, x, primes.upto(x)))
}

fn class_membership_on(spec: &MultSpec, big_a: f64, big_b: f64, x: u64, primes: &[u64]) -> ConditionReport {
    let mut max_abs = 0.0f64;
    let mut worst = 1;
    for &p in primes {
        let v = spec.value(p, 1).norm();
        if v > max_abs {
            max_abs = v;
            worst = p;
        }
    }
    let mut tail = Neumaier::default();
    for &p in primes {
        let Some(mut q) = p.checked_mul(p) else { break };
        if q > x {
            break;
        }
        let mut nu = 2;
        while q <= x {
            let v = spec.value(p, nu).norm();
            tail.add(v * (q as f64).ln() / q as f64);
            nu += 1;
            match q.checked_mul(p) {
                Some(n) => q = n,
                None => break,
            }
        }
    }
    let tail = tail.value();
    let ratio_a = max_abs / big_a;
    let ratio_b = if big_b > 0.0 { tail / big_b } else { f64::INFINITY };
    ConditionReport {
        condition_id: ConditionId::ClassM,
        holds: max_abs <= big_a && tail <= big_b,
        measured_constant: ratio_a.max(ratio_b),
        y_grid: vec![x as f64],
        worst_y: worst,
        lhs: tail,
        rhs: big_b,
    }
}

/// Which theorem a hypothesis set belongs to; fixes the exponents and the
/// class-membership constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Mertens-type main term (class `M(A, B)`, exponent `h` from `b`, `rho`).
    MertensType,
    /// Comparison with `r` (class `M(2A, B)`, `h = (1-b)/b`, `(1.7)` with `h = 1`).
    Comparison,
    /// Twisted comparison: as [`Theorem::Comparison`] applied to `f_tau`.
    TwistedComparison,
    /// Gaussian distribution of additive functions.
    Distribution,
    /// Sifted mean values.
    Sifted,
}

/// Precomputed prime data for repeated checks on one `(f, r, x)`.
pub struct Hypotheses<'a> {
    params: &'a Params,
    x: u64,
    primes: &'a [u64],
    f: Vec<Complex64>,
    r: Vec<f64>,
    r_spec: MultSpec,
    h: Option<AddSpec>,
    /// Running sums over the prime index: `(r - Re f)/p`,
    /// `(r - rho) log p / p`, `r log p / p`.
    gap: Vec<f64>,
    rho_dev: Vec<f64>,
    r_log: Vec<f64>,
}

fn running(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = Neumaier::default();
    std::iter::once(0.0)
        .chain(values.map(|v| {
            acc.add(v);
            acc.value()
        }))
        .collect()
}

impl<'a> Hypotheses<'a> {
    pub fn new(
        params: &'a Params,
        f: &MultSpec,
        r: &MultSpec,
        x: u64,
        primes: &'a PrimeTable,
    ) -> Result<Self> {
        if primes.bound() < x {
            return Err(Error::BoundMismatch { needed: x, have: primes.bound() });
        }
        let ps = primes.upto(x);
        let fv: Vec<Complex64> = ps.iter().map(|&p| f.value(p, 1)).collect();
        let rv: Vec<f64> = ps.iter().map(|&p| r.value(p, 1).re).collect();
        let gap = running(ps.iter().zip(&fv).zip(&rv).map(|((&p, fp), rp)| (rp - fp.re) / p as f64));
        let rho_dev = running(
            ps.iter()
                .zip(&rv)
                .map(|(&p, rp)| (rp - params.rho) * (p as f64).ln() / p as f64),
        );
        let r_log = running(ps.iter().zip(&rv).map(|(&p, rp)| rp * (p as f64).ln() / p as f64));
        Ok(Hypotheses {
            params,
            x,
            primes: ps,
            f: fv,
            r: rv,
            r_spec: r.clone(),
            h: None,
            gap,
            rho_dev,
            r_log,
        })
    }

    pub fn with_additive(mut self, h: &AddSpec) -> Self {
        self.h = Some(h.clone());
        self
    }

    /// Number of primes `<= y`.
    fn pi(&self, y: f64) -> usize {
        self.primes.partition_point(|&p| (p as f64) <= y)
    }

    /// `(r(p) - Re f(p))^e`, clamped below at 0 (the difference is non-negative
    /// whenever `|f| <= r`).
    fn gap_pow(&self, i: usize, e: f64) -> f64 {
        (self.r[i] - self.f[i].re).max(0.0).powf(e)
    }

    /// Run `id` with the exponent taken from `params.h`.
    pub fn check(&self, id: ConditionId) -> Result<ConditionReport> {
        self.check_with_exponent(id, self.params.h)
    }

    /// Run `id`; `exponent` is the `h` used by `C1_4` and `C1_7`.
    pub fn check_with_exponent(&self, id: ConditionId, exponent: f64) -> Result<ConditionReport> {
        let p = self.params;
        let x = self.x;
        let log_x = (x as f64).ln();
        match id {
            ConditionId::ClassM => {
                Ok(class_membership_on(&self.r_spec, p.big_a, p.big_b, x, self.primes))
            }
            ConditionId::C1_3 => {
                let lhs = self.gap[self.primes.len()];
                let rhs = 0.5 * beta(p.rho, p.big_a) * p.b * (1.0 / p.eps).ln();
                Ok(single(id, lhs <= rhs, lhs.max(0.0) / rhs, x, lhs, rhs))
            }
            ConditionId::C1_4 => {
                let grid = upper_grid(x, p.eps)?;
                let start = self.pi((p.eps * log_x).exp());
                let scale = p.eps.powf(p.delta1 * exponent);
                let mut acc = Neumaier::default();
                let mut i = start;
                let mut best = Sup::default();
                for &y in &grid {
                    let end = self.pi(y);
                    while i < end {
                        let q = self.primes[i] as f64;
                        acc.add(self.gap_pow(i, exponent) * q.ln() / q);
                        i += 1;
                    }
                    let rhs = scale * y.ln();
                    best.offer(acc.value().abs() / rhs, y, acc.value(), rhs);
                }
                Ok(best.report(id, grid, p.threshold))
            }
            ConditionId::C1_5 => {
                let grid = upper_grid(x, p.eps)?;
                let mut best = Sup::default();
                for &y in &grid {
                    let lhs = self.rho_dev[self.pi(y)];
                    let rhs = p.eps * y.ln();
                    best.offer(lhs.abs() / rhs, y, lhs, rhs);
                }
                Ok(best.report(id, grid, p.threshold))
            }
            ConditionId::C1_7 => {
                let start = self.pi((p.eps * log_x).exp());
                let mut acc = Neumaier::default();
                for i in start..self.primes.len() {
                    acc.add(self.gap_pow(i, exponent) / self.primes[i] as f64);
                }
                let lhs = acc.value();
                let rhs = p.eps.powf(p.delta1 * exponent);
                let c = lhs.abs() / rhs;
                Ok(single(id, c <= p.threshold, c, x, lhs, rhs))
            }
            ConditionId::C1_8 => {
                let start = self.pi((p.eps * log_x).exp());
                let mut lhs = 0.0f64;
                let mut worst = x;
                for i in start..self.primes.len() {
                    let g = self.r[i] - self.f[i].re;
                    if g > lhs {
                        lhs = g;
                        worst = self.primes[i];
                    }
                }
                let rhs = p.eps.powf(p.delta1);
                let c = lhs / rhs;
                let mut rep = single(id, c <= p.threshold, c, x, lhs, rhs);
                rep.worst_y = worst;
                Ok(rep)
            }
            ConditionId::C1_12 => {
                let grid = closed_grid((1.0 / p.eps1).exp(), (log_x / (1.0 + p.eps1)).exp())?;
                self.block_lower_bound(id, grid, p.eps1, 4.0 * p.b * p.eps1)
            }
            ConditionId::C4_4 => {
                let eta = log_x.powf(-0.25);
                let grid = closed_grid((1.0 / eta).exp(), (log_x / (1.0 + eta)).exp())?;
                self.block_lower_bound(id, grid, eta, p.b * eta)
            }
            ConditionId::C3_1_iv => {
                let h = self.h.as_ref().ok_or_else(|| {
                    Error::Contract("C3_1_iv needs an additive function".into())
                })?;
                let mut acc = Neumaier::default();
                for &q in self.primes {
                    let Some(mut pk) = q.checked_mul(q) else { break };
                    if pk > x {
                        break;
                    }
                    let mut nu = 2;
                    while pk <= x {
                        let r = self.r_spec.value(q, nu).re;
                        acc.add(r * h.value(q, nu).abs() * (pk as f64).ln() / pk as f64);
                        nu += 1;
                        match pk.checked_mul(q) {
                            Some(n) => pk = n,
                            None => break,
                        }
                    }
                }
                let lhs = acc.value();
                Ok(single(id, lhs <= p.threshold, lhs, x, lhs, 1.0))
            }
        }
    }

    /// `sum_{y < p <= y^{1+w}} r(p) log p / p >= c log y` on the grid.
    fn block_lower_bound(
        &self,
        id: ConditionId,
        grid: Vec<f64>,
        width: f64,
        c: f64,
    ) -> Result<ConditionReport> {
        let mut worst = (f64::INFINITY, 0.0, 0.0, 0.0);
        for &y in &grid {
            let top = y.powf(1.0 + width).min(self.x as f64);
            let lhs = self.r_log[self.pi(top)] - self.r_log[self.pi(y)];
            let rhs = c * y.ln();
            let ratio = lhs / rhs;
            if ratio < worst.0 {
                worst = (ratio, y, lhs, rhs);
            }
        }
        Ok(ConditionReport {
            condition_id: id,
            holds: worst.0 >= 1.0,
            measured_constant: worst.0.max(0.0),
            y_grid: grid,
            worst_y: worst.1 as u64,
            lhs: worst.2,
            rhs: worst.3,
        })
    }

    /// The hypothesis set of `theorem`, with the exponents it prescribes.
    pub fn theorem_set(&self, theorem: Theorem) -> Result<Vec<ConditionReport>> {
        let p = self.params;
        let h12 = h_theorem_1_2(p.b);
        let mut out = Vec::new();
        match theorem {
            Theorem::MertensType => {
                out.push(self.check(ConditionId::ClassM)?);
                out.push(self.check(ConditionId::C1_3)?);
                out.push(self.check_with_exponent(ConditionId::C1_4, h_theorem_1_1(p.b, p.rho))?);
                out.push(self.check(ConditionId::C1_5)?);
                out.push(self.check_with_exponent(ConditionId::C1_7, h_theorem_1_1(p.b, p.rho))?);
                out.push(self.check(ConditionId::C1_8)?);
            }
            Theorem::Comparison | Theorem::TwistedComparison => {
                out.push(class_membership_on(&self.r_spec, 2.0 * p.big_a, p.big_b, self.x, self.primes));
                out.push(self.check(ConditionId::C1_3)?);
                let e = match (theorem, p.twisted_exponent) {
                    (Theorem::TwistedComparison, TwistedExponent::B) => p.b,
                    _ => h12,
                };
                out.push(self.check_with_exponent(ConditionId::C1_4, e)?);
                out.push(self.check_with_exponent(ConditionId::C1_7, 1.0)?);
                out.push(self.check(ConditionId::C1_12)?);
            }
            Theorem::Distribution => {
                out.push(self.check(ConditionId::ClassM)?);
                out.push(self.check(ConditionId::C3_1_iv)?);
            }
            Theorem::Sifted => {
                out.push(self.check(ConditionId::ClassM)?);
                out.push(self.check(ConditionId::C4_4)?);
            }
        }
        Ok(out)
    }
}

#[derive(Default)]
struct Sup {
    best: Option<(f64, f64, f64, f64)>,
}

impl Sup {
    fn offer(&mut self, ratio: f64, y: f64, lhs: f64, rhs: f64) {
        if self.best.map_or(true, |b| ratio > b.0) {
            self.best = Some((ratio, y, lhs, rhs));
        }
    }

    fn report(self, id: ConditionId, grid: Vec<f64>, threshold: f64) -> ConditionReport {
        let (c, y, lhs, rhs) = self.best.unwrap_or((0.0, 0.0, 0.0, 0.0));
        ConditionReport {
            condition_id: id,
            holds: c <= threshold,
            measured_constant: c,
            y_grid: grid,
            worst_y: y as u64,
            lhs,
            rhs,
        }
    }
}

fn single(id: ConditionId, holds: bool, c: f64, x: u64, lhs: f64, rhs: f64) -> ConditionReport {
    ConditionReport {
        condition_id: id,
        holds,
        measured_constant: c,
        y_grid: vec![x as f64],
        worst_y: x,
        lhs,
        rhs,
    }
}

/// Check one condition for `(f, r)` at scale `x`, exponents from `params.h`.
pub fn check_condition(
    id: ConditionId,
    params: &Params,
    f: &MultSpec,
    r: &MultSpec,
    x: u64,
    primes: &PrimeTable,
) -> Result<ConditionReport> {
    Hypotheses::new(params, f, r, x, primes)?.check(id)
}
