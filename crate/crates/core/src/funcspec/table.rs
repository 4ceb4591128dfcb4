use num_complex::Complex64;
use rayon::prelude::*;

use super::{AddSpec, MultSpec};
use crate::error::{Error, Result};
use crate::sieve::{factor_segments, PrimeTable, SpfTable};
use crate::sum::{Neumaier, NeumaierC};

/// Chunk length for parallel fills inside one dyadic block.
const CHUNK: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
enum Column {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// Exact values `f(1..=x)` with running sums.
///
/// Both vectors are indexed by `n` directly; slot 0 holds 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    bound: u64,
    values: Column,
    prefix: Column,
}

impl ValueTable {
    /// Wrap `values[n]` for `n` in `0..=bound` (slot 0 is ignored and zeroed).
    pub fn from_real(mut values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "value table needs slot 0");
        values[0] = 0.0;
        let mut acc = Neumaier::default();
        let prefix = values
            .iter()
            .map(|&v| {
                acc.add(v);
                acc.value()
            })
            .collect();
        ValueTable {
            bound: values.len() as u64 - 1,
            values: Column::Real(values),
            prefix: Column::Real(prefix),
        }
    }

    pub fn from_complex(mut values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty(), "value table needs slot 0");
        values[0] = Complex64::new(0.0, 0.0);
        let mut acc = NeumaierC::default();
        let prefix = values
            .iter()
            .map(|&v| {
                acc.add(v);
                acc.value()
            })
            .collect();
        ValueTable {
            bound: values.len() as u64 - 1,
            values: Column::Complex(values),
            prefix: Column::Complex(prefix),
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn is_real(&self) -> bool {
        matches!(self.values, Column::Real(_))
    }

    /// `f(n)` for `1 <= n <= bound`.
    pub fn value(&self, n: u64) -> Complex64 {
        match &self.values {
            Column::Real(v) => Complex64::new(v[n as usize], 0.0),
            Column::Complex(v) => v[n as usize],
        }
    }

    /// Real values indexed by `n` (slot 0 unused), when the table is real.
    pub fn real_values(&self) -> Option<&[f64]> {
        match &self.values {
            Column::Real(v) => Some(v),
            Column::Complex(_) => None,
        }
    }

    pub fn complex_values(&self) -> Option<&[Complex64]> {
        match &self.values {
            Column::Complex(v) => Some(v),
            Column::Real(_) => None,
        }
    }

    /// `M(y; f) = sum_{n <= y} f(n)`.
    pub fn summatory(&self, y: u64) -> Result<Complex64> {
        if y == 0 || y > self.bound {
            return Err(Error::Range(format!("summatory: y = {y} outside [1, {}]", self.bound)));
        }
        Ok(self.prefix_at(y))
    }

    /// Prefix sum with `y = 0` allowed (giving 0).
    pub(crate) fn prefix_at(&self, y: u64) -> Complex64 {
        match &self.prefix {
            Column::Real(v) => Complex64::new(v[y as usize], 0.0),
            Column::Complex(v) => v[y as usize],
        }
    }
}

/// `M(y; f)` from a table.
pub fn summatory(table: &ValueTable, y: u64) -> Result<Complex64> {
    table.summatory(y)
}

trait Scalar: Copy + Send + Sync + std::ops::Mul<Output = Self> + std::ops::Add<Output = Self> {
    const ZERO: Self;
    fn from_complex(c: Complex64) -> Self;
    fn finite(self) -> bool;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    fn from_complex(c: Complex64) -> Self {
        c.re
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64 { re: 0.0, im: 0.0 };
    fn from_complex(c: Complex64) -> Self {
        c
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Fill `out[n]` for `n` in `[1, x]` by `out[n] = combine(out[q], out[n / q])`
/// where `q = p^nu || n` for `p = spf(n)`, or `out[n] = at_prime_power(p, nu)`
/// when `n` is itself a prime power.
///
/// Every dependency of `n` lies below `n / 2`, so the dyadic blocks
/// `[2^k, 2^{k+1})` are processed in order and each block in parallel chunks;
/// the result is the same as a sequential pass.
fn fill_by_spf<T, P, C>(x: u64, spf: &SpfTable, at_prime_power: P, combine: C) -> Result<Vec<T>>
where
    T: Scalar,
    P: Fn(u64, u32) -> Result<T> + Sync,
    C: Fn(T, T) -> T + Sync,
{
    let n_max = x as usize;
    let mut out = vec![T::ZERO; n_max + 1];
    let mut start = 2usize;
    while start <= n_max {
        let end = (2 * start).min(n_max + 1);
        let (done, rest) = out.split_at_mut(start);
        let done: &[T] = done;
        let block = &mut rest[..end - start];
        let results: Vec<Result<()>> = block
            .par_chunks_mut(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| {
                let base = start + ci * CHUNK;
                for (i, slot) in chunk.iter_mut().enumerate() {
                    let n = (base + i) as u64;
                    let p = spf.spf(n);
                    let mut q = p;
                    let mut nu = 1;
                    let mut m = n / p;
                    while m % p == 0 {
                        m /= p;
                        q *= p;
                        nu += 1;
                    }
                    *slot = if m == 1 {
                        at_prime_power(p, nu)?
                    } else {
                        combine(done[q as usize], done[m as usize])
                    };
                }
                Ok(())
            })
            .collect();
        results.into_iter().collect::<Result<()>>()?;
        start = end;
    }
    Ok(out)
}

fn check_range(x: u64, spf: &SpfTable) -> Result<()> {
    if x == 0 {
        return Err(Error::Contract("table bound x must be >= 1".into()));
    }
    if x > spf.bound() {
        return Err(Error::BoundMismatch { needed: x, have: spf.bound() });
    }
    Ok(())
}

fn checked<T: Scalar>(v: Complex64, p: u64, nu: u32) -> Result<T> {
    let t = T::from_complex(v);
    if t.finite() {
        Ok(t)
    } else {
        Err(Error::Evaluation { p, nu })
    }
}

/// Tabulate a multiplicative spec on `[1, x]`. Real specs give real tables.
pub fn eval_mult(spec: &MultSpec, x: u64, spf: &SpfTable) -> Result<ValueTable> {
    check_range(x, spf)?;
    if spec.is_real() {
        let mut v: Vec<f64> =
            fill_by_spf(x, spf, |p, nu| checked(spec.value(p, nu), p, nu), |a, b| a * b)?;
        v[1] = 1.0;
        Ok(ValueTable::from_real(v))
    } else {
        let mut v: Vec<Complex64> =
            fill_by_spf(x, spf, |p, nu| checked(spec.value(p, nu), p, nu), |a, b| a * b)?;
        v[1] = Complex64::new(1.0, 0.0);
        Ok(ValueTable::from_complex(v))
    }
}

/// Tabulate an additive spec on `[1, x]`; `h(1) = 0`.
pub fn eval_add(spec: &AddSpec, x: u64, spf: &SpfTable) -> Result<ValueTable> {
    check_range(x, spf)?;
    let v: Vec<f64> = fill_by_spf(
        x,
        spf,
        |p, nu| checked(Complex64::new(spec.value(p, nu), 0.0), p, nu),
        |a, b| a + b,
    )?;
    Ok(ValueTable::from_real(v))
}

/// Tabulate a multiplicative spec through the segmented factoring pass, without
/// a smallest-prime-factor table. Agrees with [`eval_mult`] up to the order of
/// the floating-point products.
pub fn eval_mult_segmented(
    spec: &MultSpec,
    x: u64,
    primes: &PrimeTable,
    segment_size: usize,
) -> Result<ValueTable> {
    if x == 0 {
        return Err(Error::Contract("table bound x must be >= 1".into()));
    }
    let segs = factor_segments(
        x,
        segment_size,
        primes,
        |_, len| (vec![Complex64::new(1.0, 0.0); len], None::<(u64, u32)>),
        |(vals, err), i, p, nu| {
            let v = spec.value(p, nu);
            if !(v.re.is_finite() && v.im.is_finite()) && err.is_none() {
                *err = Some((p, nu));
            }
            vals[i] *= v;
        },
        |s| s,
    )?;
    let mut all = vec![Complex64::new(0.0, 0.0)];
    for (vals, err) in segs {
        if let Some((p, nu)) = err {
            return Err(Error::Evaluation { p, nu });
        }
        all.extend(vals);
    }
    if spec.is_real() {
        Ok(ValueTable::from_real(all.into_iter().map(|c| c.re).collect()))
    } else {
        Ok(ValueTable::from_complex(all))
    }
}

/// Dirichlet convolution of two tables on `[1, x]`, in `O(x log x)`.
pub fn convolve_table(a: &ValueTable, b: &ValueTable, x: u64) -> Result<ValueTable> {
    for t in [a, b] {
        if t.bound() < x {
            return Err(Error::BoundMismatch { needed: x, have: t.bound() });
        }
    }
    let n = x as usize;
    if let (Some(av), Some(bv)) = (a.real_values(), b.real_values()) {
        let mut out = vec![0.0; n + 1];
        for d in 1..=n {
            let ad = av[d];
            if ad == 0.0 {
                continue;
            }
            for k in 1..=n / d {
                out[d * k] += ad * bv[k];
            }
        }
        return Ok(ValueTable::from_real(out));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for d in 1..=n {
        let ad = a.value(d as u64);
        if ad == Complex64::new(0.0, 0.0) {
            continue;
        }
        for k in 1..=n / d {
            out[d * k] += ad * b.value(k as u64);
        }
    }
    Ok(ValueTable::from_complex(out))
}
