//! Prime tables, smallest-prime-factor tables and factorization.
//!
//! Two ways to factor every integer up to a bound are provided:
//!
//! - [`SpfTable`] stores the smallest prime factor of each `n <= bound` in a
//!   32-bit word, so factoring a single `n` costs `O(log n)` lookups. Built either
//!   by a linear sieve or segment by segment.
//! - [`factor_segments`] walks `[1, bound]` in fixed segments and reports every
//!   `(p, nu)` with `p^nu || n`, using only the primes up to `sqrt(bound)`. Nothing
//!   of size `bound` is ever allocated, which is what the large streaming passes use.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default number of entries per segment for segmented builds.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 22;

/// Default memory budget for a monolithic [`SpfTable`], in bytes.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Integer square root, `floor(sqrt(n))`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= n) {
        r += 1;
    }
    r
}

/// The primes up to a bound, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes over odd numbers, processed in cache-sized segments.
    pub fn build(bound: u64) -> Self {
        if bound < 2 {
            return PrimeTable { bound, primes: Vec::new() };
        }
        let root = isqrt(bound);
        let base = small_primes(root);

        let mut primes = vec![2u64];
        // Odd n in [lo, hi) are represented by index (n - lo) / 2.
        const SEG: u64 = 1 << 19;
        let mut flags = vec![true; (SEG / 2) as usize];
        let mut lo = 3u64;
        while lo <= bound {
            let hi = (lo + SEG).min(bound + 1);
            let len = ((hi - lo + 1) / 2) as usize;
            flags[..len].fill(true);
            for &p in base.iter().skip(1) {
                if p * p >= hi {
                    break;
                }
                let mut m = (p * p).max((lo + p - 1) / p * p);
                if m % 2 == 0 {
                    m += p;
                }
                while m < hi {
                    flags[((m - lo) / 2) as usize] = false;
                    m += 2 * p;
                }
            }
            primes.extend(
                flags[..len]
                    .iter()
                    .enumerate()
                    .filter(|(_, &f)| f)
                    .map(|(i, _)| lo + 2 * i as u64)
                    .filter(|&n| n <= bound),
            );
            lo = hi + (hi % 2 == 0) as u64;
        }
        PrimeTable { bound, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `pi(y)` for `y <= bound`.
    pub fn count_upto(&self, y: u64) -> usize {
        debug_assert!(y <= self.bound || self.primes.is_empty());
        self.primes.partition_point(|&p| p <= y)
    }

    /// The primes `p <= y`.
    pub fn upto(&self, y: u64) -> &[u64] {
        &self.primes[..self.count_upto(y)]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Build the table of primes `<= bound`.
pub fn build_primes(bound: u64) -> PrimeTable {
    PrimeTable::build(bound)
}

fn small_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest prime factor of every `2 <= n <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpfTable {
    bound: u64,
    spf: Vec<u32>,
    segment_size: usize,
}

impl SpfTable {
    /// Linear sieve with the default memory budget.
    pub fn build(bound: u64) -> Result<Self> {
        Self::build_with_budget(bound, DEFAULT_MEMORY_BUDGET)
    }

    pub fn build_with_budget(bound: u64, budget_bytes: u64) -> Result<Self> {
        check_budget(bound, budget_bytes)?;
        let n = bound as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si {
                    break;
                }
                let m = i * p as usize;
                if m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        if n >= 1 {
            spf[1] = 1;
        }
        Ok(SpfTable { bound, spf, segment_size: n + 1 })
    }

    /// Segment-by-segment build; segments are filled in parallel and the result
    /// is identical to [`SpfTable::build`].
    pub fn build_segmented(bound: u64, segment_size: usize) -> Result<Self> {
        check_budget(bound, DEFAULT_MEMORY_BUDGET)?;
        if segment_size == 0 {
            return Err(Error::Contract("segment size must be positive".into()));
        }
        let base = small_primes(isqrt(bound));
        let mut spf = vec![0u32; bound as usize + 1];
        spf.par_chunks_mut(segment_size)
            .enumerate()
            .for_each(|(k, chunk)| {
                let lo = (k * segment_size) as u64;
                let hi = lo + chunk.len() as u64;
                for &p in &base {
                    if p * p >= hi {
                        break;
                    }
                    let mut m = (p * p).max((lo + p - 1) / p * p);
                    while m < hi {
                        let slot = &mut chunk[(m - lo) as usize];
                        if *slot == 0 {
                            *slot = p as u32;
                        }
                        m += p;
                    }
                }
                for (i, slot) in chunk.iter_mut().enumerate() {
                    let n = lo + i as u64;
                    if *slot == 0 && n >= 1 {
                        *slot = n as u32;
                    }
                }
            });
        Ok(SpfTable { bound, spf, segment_size })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn segment_size(&self) -> usize {
        self.segment_size
    }

    /// Smallest prime factor of `n`, with `spf(1) = 1`.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.bound {
            return Err(Error::Contract(format!(
                "factorize: n = {n} outside [1, {}]",
                self.bound
            )));
        }
        let mut parts = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf(m);
            let mut nu = 0;
            while m % p == 0 {
                m /= p;
                nu += 1;
            }
            parts.push((p, nu));
        }
        Ok(Factorization { parts })
    }
}

fn check_budget(bound: u64, budget_bytes: u64) -> Result<()> {
    if bound < 2 {
        return Err(Error::Contract(format!("spf table needs bound >= 2, got {bound}")));
    }
    if bound >= u32::MAX as u64 {
        return Err(Error::Resource(format!(
            "spf table bound {bound} does not fit 32-bit entries"
        )));
    }
    let bytes = 4 * (bound + 1);
    if bytes > budget_bytes {
        return Err(Error::Resource(format!(
            "spf table for bound {bound} needs {bytes} bytes, budget is {budget_bytes}"
        )));
    }
    Ok(())
}

/// Build the smallest-prime-factor table for `[2, bound]`.
pub fn build_spf(bound: u64) -> Result<SpfTable> {
    SpfTable::build(bound)
}

/// Factor `n` with a prebuilt table.
pub fn factorize(n: u64, table: &SpfTable) -> Result<Factorization> {
    table.factorize(n)
}

/// Canonical factorization: `(p, nu)` pairs with strictly increasing primes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    parts: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn from_parts(parts: Vec<(u64, u32)>) -> Self {
        Factorization { parts }
    }

    pub fn parts(&self) -> &[(u64, u32)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The factored integer.
    pub fn value(&self) -> u64 {
        self.parts.iter().map(|&(p, nu)| p.pow(nu)).product()
    }

    /// `P+(n)`, the largest prime factor, with `P+(1) = 1`.
    pub fn largest_prime(&self) -> u64 {
        self.parts.last().map_or(1, |&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.parts.len() as u32
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.parts.iter().map(|&(_, nu)| nu).sum()
    }
}

/// `P+(n)` by trial division, for moduli that may exceed any sieved bound.
pub fn largest_prime_factor(mut n: u64) -> u64 {
    if n <= 1 {
        return 1;
    }
    let mut largest = 1;
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            largest = d;
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        largest = n;
    }
    largest
}

/// The distinct prime divisors of `n`, by trial division.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Walk `[1, bound]` in segments of `segment_size` integers and report every
/// prime-power exact divisor.
///
/// For each segment `[lo, lo + len)`, `init(lo, len)` creates the segment state,
/// then `visit(&mut state, n - lo, p, nu)` is called for every `p^nu || n`, in
/// ascending order of `p` for each `n`; `n = 1` gets no calls. Finally
/// `finish(state)` turns the state into the segment result. Segments run in
/// parallel, results come back in segment order, so any fold over them in order
/// is independent of the thread count.
///
/// `primes` must contain every prime up to `sqrt(bound)`.
pub fn factor_segments<S, T, I, V, F>(
    bound: u64,
    segment_size: usize,
    primes: &PrimeTable,
    init: I,
    visit: V,
    finish: F,
) -> Result<Vec<T>>
where
    S: Send,
    T: Send,
    I: Fn(u64, usize) -> S + Sync,
    V: Fn(&mut S, usize, u64, u32) + Sync,
    F: Fn(S) -> T + Sync,
{
    if segment_size == 0 {
        return Err(Error::Contract("segment size must be positive".into()));
    }
    let root = isqrt(bound);
    if primes.bound() < root {
        return Err(Error::BoundMismatch { needed: root, have: primes.bound() });
    }
    if bound == 0 {
        return Ok(Vec::new());
    }
    let small = primes.upto(root);
    let count = ((bound + segment_size as u64 - 1) / segment_size as u64) as usize;
    let out = (0..count)
        .into_par_iter()
        .map(|k| {
            let lo = 1 + (k * segment_size) as u64;
            let hi = (lo + segment_size as u64).min(bound + 1);
            let len = (hi - lo) as usize;
            let mut rem: Vec<u64> = (lo..hi).collect();
            let mut state = init(lo, len);
            for &p in small {
                if p * p >= hi {
                    break;
                }
                let mut m = (lo + p - 1) / p * p;
                while m < hi {
                    let idx = (m - lo) as usize;
                    let mut r = rem[idx] / p;
                    let mut nu = 1;
                    while r % p == 0 {
                        r /= p;
                        nu += 1;
                    }
                    rem[idx] = r;
                    visit(&mut state, idx, p, nu);
                    m += p;
                }
            }
            for (idx, &r) in rem.iter().enumerate() {
                if r > 1 {
                    visit(&mut state, idx, r, 1);
                }
            }
            finish(state)
        })
        .collect();
    Ok(out)
}
