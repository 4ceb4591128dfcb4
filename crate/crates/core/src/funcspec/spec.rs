use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest admissible `|z|` for `bigomega_exp`; the local factor at `p = 2`
/// diverges at `|z| = 2`.
pub const BIGOMEGA_Z_MAX: f64 = 1.9;

type Rule = dyn Fn(u64, u32) -> Complex64 + Send + Sync;

/// Real values attached to finitely many primes; every other prime maps to 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PrimeValues {
    entries: Vec<(u64, f64)>,
}

impl PrimeValues {
    pub fn new(mut entries: Vec<(u64, f64)>) -> Self {
        entries.sort_by_key(|&(p, _)| p);
        entries.dedup_by_key(|&mut (p, _)| p);
        PrimeValues { entries }
    }

    pub fn get(&self, p: u64) -> f64 {
        self.entries
            .binary_search_by_key(&p, |&(q, _)| q)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(u64, f64)> for PrimeValues {
    fn from_iter<I: IntoIterator<Item = (u64, f64)>>(iter: I) -> Self {
        PrimeValues::new(iter.into_iter().collect())
    }
}

#[derive(Clone)]
enum Kind {
    Unit,
    One,
    Squarefree,
    Divisor { rho: f64 },
    OmegaExp { z: Complex64 },
    BigOmegaExp { z: Complex64 },
    Twist { inner: MultSpec, tau: f64 },
    Coprime { inner: MultSpec, modulus: u64 },
    Conv(MultSpec, MultSpec),
    ExpExt(MultSpec),
    Cofactor { r: MultSpec, s: MultSpec },
    PrimeSupported(Arc<PrimeValues>),
    Custom { name: String, rule: Arc<Rule> },
}

/// A multiplicative function given by its values at prime powers.
#[derive(Clone)]
pub struct MultSpec {
    kind: Arc<Kind>,
    is_real: bool,
    is_nonnegative: bool,
}

impl MultSpec {
    fn new(kind: Kind, is_real: bool, is_nonnegative: bool) -> Self {
        MultSpec { kind: Arc::new(kind), is_real, is_nonnegative: is_real && is_nonnegative }
    }

    /// The Dirichlet identity: 1 at `n = 1`, 0 elsewhere.
    pub fn unit() -> Self {
        Self::new(Kind::Unit, true, true)
    }

    pub fn one() -> Self {
        Self::new(Kind::One, true, true)
    }

    /// `mu^2`, the indicator of squarefree integers.
    pub fn squarefree() -> Self {
        Self::new(Kind::Squarefree, true, true)
    }

    /// Generalised divisor function `tau_rho` with `tau_rho(p^nu) = C(rho + nu - 1, nu)`,
    /// so `tau_rho(p) = rho`.
    pub fn divisor(rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::Construction(format!("divisor: rho = {rho} is not finite")));
        }
        Ok(Self::new(Kind::Divisor { rho }, true, rho >= 0.0))
    }

    /// `z^{omega(n)}`.
    pub fn omega_exp(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Construction(format!("omega_exp: z = {z} is not finite")));
        }
        Ok(Self::new(Kind::OmegaExp { z }, z.im == 0.0, z.im == 0.0 && z.re >= 0.0))
    }

    /// `z^{Omega(n)}`, restricted to `|z| <= 1.9`.
    pub fn bigomega_exp(z: Complex64) -> Result<Self> {
        if !(z.norm() <= BIGOMEGA_Z_MAX) {
            return Err(Error::Construction(format!(
                "bigomega_exp: |z| = {} exceeds {BIGOMEGA_Z_MAX}",
                z.norm()
            )));
        }
        Ok(Self::new(Kind::BigOmegaExp { z }, z.im == 0.0, z.im == 0.0 && z.re >= 0.0))
    }

    /// `f(n) / n^{i tau}`. A zero twist returns `f` itself.
    pub fn twist(f: &MultSpec, tau: f64) -> Self {
        if tau == 0.0 {
            return f.clone();
        }
        Self::new(Kind::Twist { inner: f.clone(), tau }, false, false)
    }

    /// `f` restricted to integers coprime to `modulus`.
    pub fn coprime(f: &MultSpec, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Contract("coprime: modulus must be >= 1".into()));
        }
        if modulus == 1 {
            return Ok(f.clone());
        }
        Ok(Self::new(
            Kind::Coprime { inner: f.clone(), modulus },
            f.is_real,
            f.is_nonnegative,
        ))
    }

    pub fn conv(f: &MultSpec, g: &MultSpec) -> Self {
        Self::new(
            Kind::Conv(f.clone(), g.clone()),
            f.is_real && g.is_real,
            f.is_nonnegative && g.is_nonnegative,
        )
    }

    /// `s(p^nu) = f(p)^nu / nu!`.
    pub fn exp_extension(f: &MultSpec) -> Self {
        Self::new(Kind::ExpExt(f.clone()), f.is_real, f.is_nonnegative)
    }

    /// The `t` with `s * t = r`.
    pub fn cofactor(r: &MultSpec, s: &MultSpec) -> Self {
        Self::new(Kind::Cofactor { r: r.clone(), s: s.clone() }, r.is_real && s.is_real, false)
    }

    /// Supported on squarefree integers, with the given values at primes.
    pub fn prime_supported(values: PrimeValues) -> Self {
        let nonneg = values.entries().iter().all(|&(_, v)| v >= 0.0);
        Self::new(Kind::PrimeSupported(Arc::new(values)), true, nonneg)
    }

    /// A spec backed by an arbitrary rule. The flags are trusted.
    pub fn custom<F>(name: &str, is_real: bool, is_nonnegative: bool, rule: F) -> Self
    where
        F: Fn(u64, u32) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(
            Kind::Custom { name: name.to_string(), rule: Arc::new(rule) },
            is_real,
            is_nonnegative,
        )
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_nonnegative(&self) -> bool {
        self.is_nonnegative
    }

    /// `w_f`: 1 for real-valued specs, 1/2 otherwise.
    pub fn w(&self) -> f64 {
        if self.is_real {
            1.0
        } else {
            0.5
        }
    }

    /// `f(p^nu)`; `nu = 0` gives 1.
    pub fn value(&self, p: u64, nu: u32) -> Complex64 {
        if nu == 0 {
            return Complex64::new(1.0, 0.0);
        }
        match &*self.kind {
            Kind::Unit => Complex64::new(0.0, 0.0),
            Kind::One => Complex64::new(1.0, 0.0),
            Kind::Squarefree => Complex64::new(if nu == 1 { 1.0 } else { 0.0 }, 0.0),
            Kind::Divisor { rho } => Complex64::new(binomial_rising(*rho, nu), 0.0),
            Kind::OmegaExp { z } => *z,
            Kind::BigOmegaExp { z } => z.powu(nu),
            Kind::Twist { inner, tau } => inner.value(p, nu) * twist_phase(p, nu, *tau),
            Kind::Coprime { inner, modulus } => {
                if modulus % p == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    inner.value(p, nu)
                }
            }
            Kind::ExpExt(inner) => inner.value(p, 1).powu(nu) / factorial(nu),
            Kind::PrimeSupported(values) => {
                Complex64::new(if nu == 1 { values.get(p) } else { 0.0 }, 0.0)
            }
            Kind::Custom { rule, .. } => rule(p, nu),
            Kind::Conv(..) | Kind::Cofactor { .. } => self.local_values(p, nu)[nu as usize],
        }
    }

    /// `[f(1), f(p), ..., f(p^max_nu)]`.
    pub fn local_values(&self, p: u64, max_nu: u32) -> Vec<Complex64> {
        let len = max_nu as usize + 1;
        match &*self.kind {
            Kind::Conv(f, g) => {
                let a = f.local_values(p, max_nu);
                let b = g.local_values(p, max_nu);
                (0..len)
                    .map(|nu| (0..=nu).map(|j| a[j] * b[nu - j]).sum())
                    .collect()
            }
            Kind::Cofactor { r, s } => {
                let rv = r.local_values(p, max_nu);
                let sv = s.local_values(p, max_nu);
                let mut t = Vec::with_capacity(len);
                t.push(Complex64::new(1.0, 0.0));
                for nu in 1..len {
                    let mut acc = rv[nu];
                    for j in 1..=nu {
                        acc -= sv[j] * t[nu - j];
                    }
                    t.push(acc);
                }
                t
            }
            _ => (0..=max_nu).map(|nu| self.value(p, nu)).collect(),
        }
    }
}

/// `C(rho + nu - 1, nu) = prod_{j=1..nu} (rho + j - 1) / j`.
fn binomial_rising(rho: f64, nu: u32) -> f64 {
    (1..=nu).fold(1.0, |acc, j| acc * (rho + j as f64 - 1.0) / j as f64)
}

fn factorial(nu: u32) -> f64 {
    (1..=nu).fold(1.0, |acc, j| acc * j as f64)
}

/// `p^{-i nu tau}`.
fn twist_phase(p: u64, nu: u32, tau: f64) -> Complex64 {
    Complex64::from_polar(1.0, -(nu as f64) * tau * (p as f64).ln())
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for MultSpec {
    /// The canonical expression, re-parseable for everything except
    /// `prime_supported` and `custom` specs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.kind {
            Kind::Unit => write!(f, "unit"),
            Kind::One => write!(f, "one"),
            Kind::Squarefree => write!(f, "squarefree"),
            Kind::Divisor { rho } => write!(f, "divisor:rho={}", fmt_num(*rho)),
            Kind::OmegaExp { z } | Kind::BigOmegaExp { z } => {
                let name = if matches!(&*self.kind, Kind::OmegaExp { .. }) {
                    "omega_exp"
                } else {
                    "bigomega_exp"
                };
                write!(f, "{name}:z={}", fmt_num(z.re))?;
                if z.im != 0.0 {
                    write!(f, ",zi={}", fmt_num(z.im))?;
                }
                Ok(())
            }
            Kind::Twist { inner, tau } => write!(f, "twist({inner},{})", fmt_num(*tau)),
            Kind::Coprime { inner, modulus } => write!(f, "coprime({inner},{modulus})"),
            Kind::Conv(a, b) => write!(f, "conv({a},{b})"),
            Kind::ExpExt(a) => write!(f, "expext({a})"),
            Kind::Cofactor { r, s } => write!(f, "cofactor({r},{s})"),
            Kind::PrimeSupported(v) => write!(f, "prime_supported[{}]", v.len()),
            Kind::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl fmt::Debug for MultSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultSpec({self})")
    }
}

impl PartialEq for MultSpec {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.kind, &other.kind) {
            return true;
        }
        match (&*self.kind, &*other.kind) {
            (Kind::Unit, Kind::Unit)
            | (Kind::One, Kind::One)
            | (Kind::Squarefree, Kind::Squarefree) => true,
            (Kind::Divisor { rho: a }, Kind::Divisor { rho: b }) => a == b,
            (Kind::OmegaExp { z: a }, Kind::OmegaExp { z: b }) => a == b,
            (Kind::BigOmegaExp { z: a }, Kind::BigOmegaExp { z: b }) => a == b,
            (Kind::Twist { inner: a, tau: s }, Kind::Twist { inner: b, tau: t }) => {
                s == t && a == b
            }
            (
                Kind::Coprime { inner: a, modulus: m },
                Kind::Coprime { inner: b, modulus: n },
            ) => m == n && a == b,
            (Kind::Conv(a, b), Kind::Conv(c, d)) => a == c && b == d,
            (Kind::ExpExt(a), Kind::ExpExt(b)) => a == b,
            (Kind::Cofactor { r: a, s: b }, Kind::Cofactor { r: c, s: d }) => a == c && b == d,
            (Kind::PrimeSupported(a), Kind::PrimeSupported(b)) => a == b,
            (Kind::Custom { rule: a, .. }, Kind::Custom { rule: b, .. }) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}
