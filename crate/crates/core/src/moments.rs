//! The weighted distribution of an additive function, its Gaussian
//! comparison, weighted central moments and the exponential tail sum.
//!
//! Everything is computed from one streaming pass over `[1, x]` that factors
//! integers segment by segment, so memory stays at a few segments regardless of
//! `x`. Only primes up to `sqrt(x)` are needed for the factoring itself; the
//! prime sums `E`, `D` use all primes up to `x`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspec::{AddSpec, MultSpec};
use crate::primesums::{self, AdditiveStats, ConditionId, Hypotheses, Params};
use crate::sieve::PrimeTable;
use crate::sum::Neumaier;

pub use crate::special::phi;

/// Integers per segment of the streaming pass.
pub const PASS_SEGMENT: usize = 1 << 20;

/// What one pass over `[1, x]` should accumulate. `thresholds` must be ascending.
#[derive(Clone, Debug, Default)]
pub struct PassConfig {
    /// Centre of the central moments.
    pub center: f64,
    /// Highest central moment.
    pub max_moment: usize,
    /// Mass with `h(n) <= threshold` is reported for each threshold.
    pub thresholds: Vec<f64>,
    /// For each `(t, scale)`: `sum r(n) exp(t |h(n) - center| / scale)`.
    pub tails: Vec<(f64, f64)>,
}

/// Result of [`weighted_pass`].
#[derive(Clone, Debug, PartialEq)]
pub struct PassTotals {
    /// `M(x; r)`.
    pub mass: f64,
    /// `central[k - 1] = sum r(n) (h(n) - center)^k`.
    pub central: Vec<f64>,
    /// `cumulative[j] = sum_{h(n) <= thresholds[j]} r(n)`.
    pub cumulative: Vec<f64>,
    pub tails: Vec<f64>,
}

struct Acc {
    mass: Neumaier,
    central: Vec<Neumaier>,
    buckets: Vec<Neumaier>,
    tails: Vec<Neumaier>,
}

impl Acc {
    fn new(cfg: &PassConfig) -> Self {
        Acc {
            mass: Neumaier::default(),
            central: vec![Neumaier::default(); cfg.max_moment],
            buckets: vec![Neumaier::default(); cfg.thresholds.len() + 1],
            tails: vec![Neumaier::default(); cfg.tails.len()],
        }
    }

    fn merge(&mut self, other: &Acc) {
        self.mass.merge(&other.mass);
        for (a, b) in self.central.iter_mut().zip(&other.central) {
            a.merge(b);
        }
        for (a, b) in self.buckets.iter_mut().zip(&other.buckets) {
            a.merge(b);
        }
        for (a, b) in self.tails.iter_mut().zip(&other.tails) {
            a.merge(b);
        }
    }
}

/// One streaming pass accumulating mass, central moments, threshold masses
/// and tail sums of the weighted sample `(h(n), r(n))`, `n <= x`.
pub fn weighted_pass(
    h: &AddSpec,
    r: &MultSpec,
    x: u64,
    primes: &PrimeTable,
    cfg: &PassConfig,
) -> Result<PassTotals> {
    if !r.is_real() {
        return Err(Error::Contract(format!("weight {r} must be real")));
    }
    if cfg.thresholds.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Contract("thresholds must be ascending".into()));
    }
    let parts = crate::sieve::factor_segments(
        x,
        PASS_SEGMENT,
        primes,
        |_, len| (vec![1.0f64; len], vec![0.0f64; len]),
        |(rv, hv): &mut (Vec<f64>, Vec<f64>), i, p, nu| {
            rv[i] *= r.value(p, nu).re;
            hv[i] += h.value(p, nu);
        },
        |(rv, hv)| {
            let mut acc = Acc::new(cfg);
            for (&w, &hn) in rv.iter().zip(&hv) {
                if w == 0.0 {
                    continue;
                }
                acc.mass.add(w);
                let dev = hn - cfg.center;
                let mut pow = w;
                for c in acc.central.iter_mut() {
                    pow *= dev;
                    c.add(pow);
                }
                if !cfg.thresholds.is_empty() {
                    let j = cfg.thresholds.partition_point(|&t| t < hn);
                    acc.buckets[j].add(w);
                }
                for (t, &(s, scale)) in acc.tails.iter_mut().zip(&cfg.tails) {
                    t.add(w * (s * dev.abs() / scale).exp());
                }
            }
            acc
        },
    )?;
    let mut total = Acc::new(cfg);
    for part in &parts {
        total.merge(part);
    }
    let mut running = Neumaier::default();
    let cumulative = total.buckets[..cfg.thresholds.len()]
        .iter()
        .map(|b| {
            running.merge(b);
            running.value()
        })
        .collect();
    Ok(PassTotals {
        mass: total.mass.value(),
        central: total.central.iter().map(Neumaier::value).collect(),
        cumulative,
        tails: total.tails.iter().map(Neumaier::value).collect(),
    })
}

fn positive_mass(mass: f64) -> Result<f64> {
    if mass > 0.0 {
        Ok(mass)
    } else {
        Err(Error::DegenerateMeasure(mass))
    }
}

/// `F_x(z; h, r) = (1/M(x;r)) sum_{n <= x, h(n) <= z} r(n)`.
pub fn dist_f(z: f64, h: &AddSpec, r: &MultSpec, x: u64, primes: &PrimeTable) -> Result<f64> {
    let cfg = PassConfig { thresholds: vec![z], ..PassConfig::default() };
    let t = weighted_pass(h, r, x, primes, &cfg)?;
    Ok(t.cumulative[0] / positive_mass(t.mass)?)
}

/// `m`-th moment of the standard normal law: 0 for odd `m`, `(m-1)!!` for even.
pub fn gaussian_moment(m: u32) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    (1..m).step_by(2).map(f64::from).product()
}

/// One computable surrogate of a distribution-theorem hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub label: &'static str,
    pub value: f64,
    pub holds: bool,
}

/// Checks (i)-(iv) of the distribution theorem plus class membership. The
/// `>> 1` conditions are read as `>= 1/threshold`, `<< 1` as `<= threshold`.
pub fn distribution_hypotheses(
    h: &AddSpec,
    r: &MultSpec,
    x: u64,
    stats: &AdditiveStats,
    params: &Params,
    primes: &PrimeTable,
) -> Result<Vec<HypothesisCheck>> {
    let floor = 1.0 / params.threshold;
    let log_x = (x as f64).ln();
    let start = log_x.sqrt().exp();
    let min_r = primes
        .upto(x)
        .iter()
        .filter(|&&p| p as f64 > start)
        .map(|&p| r.value(p, 1).re)
        .fold(f64::INFINITY, f64::min);
    let hyp = Hypotheses::new(params, r, r, x, primes)?.with_additive(h);
    let class = hyp.check(ConditionId::ClassM)?;
    let tail = hyp.check(ConditionId::C3_1_iv)?;
    Ok(vec![
        HypothesisCheck { label: "class", value: class.measured_constant, holds: class.holds },
        HypothesisCheck { label: "min_r", value: min_r, holds: min_r >= floor },
        HypothesisCheck { label: "D", value: stats.d, holds: stats.d >= floor },
        HypothesisCheck { label: "mu", value: stats.mu, holds: stats.mu <= 1.0 },
        HypothesisCheck { label: "prime_powers", value: tail.measured_constant, holds: tail.holds },
    ])
}

fn warnings(checks: &[HypothesisCheck]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| format!("hypothesis {} fails (measured {})", c.label, c.value))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub m: u32,
    pub g_m: f64,
    pub nu_m: f64,
    /// `|G_m / D^m - nu_m|`.
    pub normalized: f64,
    /// `theta (log 1/theta)^{m/2}`, only when `theta < 1`.
    pub budget: Option<f64>,
    pub d: f64,
    pub warnings: Vec<String>,
}

impl MomentReport {
    pub const CSV_HEADER: &'static str = "m,G_m,nu_m,normalized,budget";

    pub fn csv_row(&self) -> String {
        let budget = self.budget.map(|b| b.to_string()).unwrap_or_default();
        format!("{},{},{},{},{}", self.m, self.g_m, self.nu_m, self.normalized, budget)
    }

    /// `G_m / D^m`.
    pub fn ratio(&self) -> f64 {
        self.g_m / self.d.powi(self.m as i32)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MomentOptions {
    /// Accept additive functions that are not strongly additive.
    pub allow_weakly_additive: bool,
}

/// Weighted central moments `G_m(x; r, h)` for every `m` in `ms`, in one pass.
pub fn moment_g(
    ms: &[u32],
    h: &AddSpec,
    r: &MultSpec,
    x: u64,
    params: &Params,
    primes: &PrimeTable,
    opts: MomentOptions,
) -> Result<Vec<MomentReport>> {
    if ms.iter().any(|&m| m == 0) {
        return Err(Error::Contract("moments need m >= 1".into()));
    }
    if !h.is_strongly_additive() && !opts.allow_weakly_additive {
        return Err(Error::Contract(format!("{h} is not strongly additive")));
    }
    let stats = primesums::additive_stats(x, h, r, primes)?;
    let warn = warnings(&distribution_hypotheses(h, r, x, &stats, params, primes)?);
    let max_m = ms.iter().copied().max().unwrap_or(0) as usize;
    let cfg = PassConfig { center: stats.e, max_moment: max_m, ..PassConfig::default() };
    let t = weighted_pass(h, r, x, primes, &cfg)?;
    let mass = positive_mass(t.mass)?;
    Ok(ms
        .iter()
        .map(|&m| {
            let g_m = t.central[m as usize - 1] / mass;
            let nu_m = gaussian_moment(m);
            let theta = stats.theta;
            MomentReport {
                m,
                g_m,
                nu_m,
                normalized: (g_m / stats.d.powi(m as i32) - nu_m).abs(),
                budget: (theta < 1.0).then(|| theta * (1.0 / theta).ln().powf(m as f64 / 2.0)),
                d: stats.d,
                warnings: warn.clone(),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistReport {
    pub x: u64,
    pub e: f64,
    pub d: f64,
    pub mu: f64,
    pub theta: f64,
    pub z_grid: Vec<f64>,
    pub f_values: Vec<f64>,
    pub phi_values: Vec<f64>,
    pub sup_distance: f64,
    pub warnings: Vec<String>,
}

impl DistReport {
    pub const CSV_HEADER: &'static str = "z,F,Phi,diff";

    /// One row per grid point, then `sup,<x>,<theta>,<sup_distance>`.
    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows: Vec<String> = self
            .z_grid
            .iter()
            .zip(self.f_values.iter().zip(&self.phi_values))
            .map(|(z, (f, p))| format!("{z},{f},{p},{}", f - p))
            .collect();
        rows.push(format!("sup,{},{},{}", self.x, self.theta, self.sup_distance));
        rows
    }
}

/// `n` equispaced points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// The default grid: 201 points on `[-4, 4]`.
pub fn default_z_grid() -> Vec<f64> {
    linear_grid(-4.0, 4.0, 201)
}

/// `F_x(E + z D)` against `Phi(z)` over an ascending `z_grid`.
pub fn ek_report(
    h: &AddSpec,
    r: &MultSpec,
    x: u64,
    z_grid: &[f64],
    params: &Params,
    primes: &PrimeTable,
) -> Result<DistReport> {
    let stats = primesums::additive_stats(x, h, r, primes)?;
    let warn = warnings(&distribution_hypotheses(h, r, x, &stats, params, primes)?);
    let cfg = PassConfig {
        thresholds: z_grid.iter().map(|z| stats.e + z * stats.d).collect(),
        ..PassConfig::default()
    };
    let t = weighted_pass(h, r, x, primes, &cfg)?;
    let mass = positive_mass(t.mass)?;
    let f_values: Vec<f64> = t.cumulative.iter().map(|c| (c / mass).min(1.0)).collect();
    let phi_values: Vec<f64> = z_grid.iter().map(|&z| phi(z)).collect();
    let sup_distance = f_values
        .iter()
        .zip(&phi_values)
        .map(|(f, p)| (f - p).abs())
        .fold(0.0, f64::max);
    Ok(DistReport {
        x,
        e: stats.e,
        d: stats.d,
        mu: stats.mu,
        theta: stats.theta,
        z_grid: z_grid.to_vec(),
        f_values,
        phi_values,
        sup_distance,
        warnings: warn,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailCheck {
    pub t: f64,
    /// `sum_{n <= x} r(n) e^{t |h(n) - E| / D}`.
    pub raw_sum: f64,
    /// `raw_sum / (e^{t^2} M(x; r))`.
    pub value: f64,
}

/// The exponential tail sum for each `t` in `ts`, all in `[0, 1/mu_x]`.
pub fn tail_check(
    ts: &[f64],
    h: &AddSpec,
    r: &MultSpec,
    x: u64,
    primes: &PrimeTable,
) -> Result<Vec<TailCheck>> {
    let stats = primesums::additive_stats(x, h, r, primes)?;
    if let Some(&t) = ts.iter().find(|&&t| !(t >= 0.0 && t <= 1.0 / stats.mu)) {
        return Err(Error::Contract(format!(
            "tail parameter t = {t} outside [0, 1/mu_x] = [0, {}]",
            1.0 / stats.mu
        )));
    }
    let cfg = PassConfig {
        center: stats.e,
        tails: ts.iter().map(|&t| (t, stats.d)).collect(),
        ..PassConfig::default()
    };
    let tot = weighted_pass(h, r, x, primes, &cfg)?;
    let mass = positive_mass(tot.mass)?;
    Ok(ts
        .iter()
        .zip(&tot.tails)
        .map(|(&t, &raw)| TailCheck { t, raw_sum: raw, value: raw / ((t * t).exp() * mass) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_primes;

    fn trial(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut nu = 0;
            while n % d == 0 {
                n /= d;
                nu += 1;
            }
            if nu > 0 {
                out.push((d, nu));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn dist_examples() {
        let primes = build_primes(100);
        let (h, r) = (AddSpec::omega(), MultSpec::one());
        assert_eq!(dist_f(1.0, &h, &r, 10, &primes).unwrap(), 0.8);
        assert_eq!(dist_f(100.0, &h, &r, 10, &primes).unwrap(), 1.0);
        assert_eq!(dist_f(-0.5, &h, &r, 10, &primes).unwrap(), 0.0);
        // M(2; r) = 1 + r(2) = 0.
        let r = MultSpec::custom("cancel", true, false, |p, _| if p == 2 { (-1.0).into() } else { 0.0.into() });
        assert!(matches!(dist_f(1.0, &h, &r, 2, &primes), Err(Error::DegenerateMeasure(_))));
    }

    #[test]
    fn dist_is_a_step_function() {
        let primes = build_primes(10_000);
        let (h, r) = (AddSpec::bigomega(), MultSpec::divisor(0.5).unwrap());
        let grid = linear_grid(-1.0, 15.0, 161);
        let cfg = PassConfig { thresholds: grid.clone(), ..PassConfig::default() };
        let t = weighted_pass(&h, &r, 10_000, &primes, &cfg).unwrap();
        let f: Vec<f64> = t.cumulative.iter().map(|c| c / t.mass).collect();
        assert!(f.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(f[0], 0.0);
        assert!((f[f.len() - 1] - 1.0).abs() < 1e-14);
        // Right-continuity at the integer jump points.
        for k in 0..10 {
            let at = dist_f(k as f64, &h, &r, 10_000, &primes).unwrap();
            let right = dist_f(k as f64 + 1e-9, &h, &r, 10_000, &primes).unwrap();
            assert_eq!(at, right);
        }
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(gaussian_moment(2), 1.0);
        assert_eq!(gaussian_moment(3), 0.0);
        assert_eq!(gaussian_moment(4), 3.0);
        assert_eq!(gaussian_moment(0), 1.0);
        // Simpson quadrature of z^m against the density on [-14, 14].
        for m in 1..=8u32 {
            let (a, b, n) = (-14.0f64, 14.0f64, 40_000);
            let hstep = (b - a) / n as f64;
            let g = |u: f64| u.powi(m as i32) * (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
            let mut s = g(a) + g(b);
            for i in 1..n {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(a + i as f64 * hstep);
            }
            let q = s * hstep / 3.0;
            assert!((q - gaussian_moment(m)).abs() <= 1e-8 * gaussian_moment(m).max(1.0), "m = {m}");
        }
    }

    #[test]
    fn first_moment_at_ten() {
        let primes = build_primes(100);
        let p = Params::defaults(10);
        let rep = moment_g(&[1], &AddSpec::omega(), &MultSpec::one(), 10, &p, &primes, Default::default())
            .unwrap();
        let e = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert!((rep[0].g_m - (1.1 - e)).abs() < 1e-14);
        assert!((rep[0].g_m + 0.076_190).abs() < 1e-6);
        assert!(matches!(
            moment_g(&[0], &AddSpec::omega(), &MultSpec::one(), 10, &p, &primes, Default::default()),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            moment_g(&[2], &AddSpec::bigomega(), &MultSpec::one(), 10, &p, &primes, Default::default()),
            Err(Error::Contract(_))
        ));
        let weak = MomentOptions { allow_weakly_additive: true };
        assert!(moment_g(&[2], &AddSpec::bigomega(), &MultSpec::one(), 10, &p, &primes, weak).is_ok());
    }

    #[test]
    fn moments_match_binomial_expansion() {
        let x = 100_000;
        let primes = build_primes(x);
        let p = Params::defaults(x);
        let r = MultSpec::divisor(0.8).unwrap();
        let h = AddSpec::omega();
        let ms: Vec<u32> = (1..=6).collect();
        let reps = moment_g(&ms, &h, &r, x, &p, &primes, Default::default()).unwrap();
        let e = primesums::additive_stats(x, &h, &r, &primes).unwrap().e;
        // Raw weighted moments by direct factorization.
        let mut raw = [0.0f64; 7];
        for n in 1..=x {
            let parts = trial(n);
            let w: f64 = parts.iter().map(|&(q, nu)| r.value(q, nu).re).product();
            let hn = parts.len() as f64;
            for (k, slot) in raw.iter_mut().enumerate() {
                *slot += w * hn.powi(k as i32);
            }
        }
        for rep in &reps {
            let m = rep.m as usize;
            let mut binom = 1.0;
            let mut g = 0.0;
            for k in 0..=m {
                g += binom * (-e).powi((m - k) as i32) * raw[k];
                binom = binom * (m - k) as f64 / (k + 1) as f64;
            }
            g /= raw[0];
            assert!((rep.g_m - g).abs() <= 1e-8 * g.abs().max(1e-3), "m = {m}: {} vs {g}", rep.g_m);
        }
    }

    #[test]
    fn ek_rejects_zero_function() {
        let primes = build_primes(1000);
        let p = Params::defaults(1000);
        let zero = AddSpec::custom("zero", true, |_, _| 0.0);
        let res = ek_report(&zero, &MultSpec::one(), 1000, &default_z_grid(), &p, &primes);
        assert!(matches!(res, Err(Error::DegenerateVariance)));
    }

    #[test]
    fn ek_report_shape() {
        let primes = build_primes(100_000);
        let p = Params::defaults(100_000);
        let rep = ek_report(&AddSpec::omega(), &MultSpec::one(), 100_000, &default_z_grid(), &p, &primes)
            .unwrap();
        assert_eq!(rep.z_grid.len(), 201);
        assert!(rep.f_values.windows(2).all(|w| w[0] <= w[1]));
        let sup = rep
            .f_values
            .iter()
            .zip(&rep.phi_values)
            .map(|(f, p)| (f - p).abs())
            .fold(0.0, f64::max);
        assert_eq!(sup, rep.sup_distance);
        assert_eq!(rep.csv_rows().len(), 202);
    }

    #[test]
    fn tail_examples() {
        let x = 10_000;
        let primes = build_primes(x);
        let (h, r) = (AddSpec::omega(), MultSpec::one());
        let res = tail_check(&[0.0, 0.5, 1.0], &h, &r, x, &primes).unwrap();
        assert_eq!(res[0].value, 1.0);
        assert!(res[0].raw_sum <= res[1].raw_sum && res[1].raw_sum <= res[2].raw_sum);
        assert!(res[2].value.is_finite() && res[2].value <= 20.0);
        assert!(matches!(tail_check(&[100.0], &h, &r, x, &primes), Err(Error::Contract(_))));
    }
}
