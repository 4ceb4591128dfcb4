//! Block-wise minorant `s` of a non-negative spec `r`.
//!
//! Primes are grouped into blocks `(y_k, y_{k+1}]` with `y_k = exp((1 + eps1)^k)`;
//! on each block `s(p) = 2 b r(p) / b_k`, where `b_k` is the block mass of
//! `r(p) log p / p` measured in units of `eps1 log y_k`. Whenever `b_k >= 4b`
//! this gives `0 <= s <= r / 2`; blocks that fall short are recorded and their
//! values are scaled by `4b` instead, so the bound holds at every prime.

use std::sync::Arc;

use super::{MultSpec, PrimeValues};
use crate::error::{Error, Result};
use crate::sieve::PrimeTable;

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub k: u32,
    /// `y_k`
    pub lower: f64,
    /// `y_{k+1}`
    pub upper: f64,
    /// `b_k`
    pub mass: f64,
    /// Whether `b_k >= 4b`.
    pub satisfies_lower_bound: bool,
}

#[derive(Clone, Debug)]
pub struct BlockMinorant {
    b: f64,
    eps1: f64,
    eps2: f64,
    x: u64,
    blocks: Vec<Block>,
    values: Arc<PrimeValues>,
}

impl BlockMinorant {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    /// `eps2 = eps * eps1 = eps1^3`.
    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The index range `K` as `(first, last)`.
    pub fn k_range(&self) -> (u32, u32) {
        (self.blocks[0].k, self.blocks[self.blocks.len() - 1].k)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| !b.satisfies_lower_bound)
    }

    /// `s(p)`; zero outside the blocks.
    pub fn prime_value(&self, p: u64) -> f64 {
        self.values.get(p)
    }

    pub fn prime_values(&self) -> &PrimeValues {
        &self.values
    }

    /// `s` as a spec supported on squarefree integers (the `s_1` of the split).
    pub fn spec(&self) -> MultSpec {
        MultSpec::prime_supported((*self.values).clone())
    }

    /// `s` extended exponentially: `s(p^nu) = s(p)^nu / nu!`.
    pub fn exp_extension(&self) -> MultSpec {
        MultSpec::exp_extension(&self.spec())
    }

    /// `Z(z; s) = sum_{p <= z} s(p) / p`.
    pub fn prime_sum(&self, z: f64) -> f64 {
        self.values
            .entries()
            .iter()
            .take_while(|&&(p, _)| p as f64 <= z)
            .map(|&(p, v)| v / p as f64)
            .sum()
    }
}

/// Build the block minorant of `r` on `[2, x]`.
///
/// `K = [log(eps2 log x) / log(1 + eps1), log log x / log(1 + eps1) - 1]`
/// intersected with the non-negative integers, `eps2 = eps1^3`. An empty `K`
/// is a construction error.
pub fn block_minorant(
    r: &MultSpec,
    b: f64,
    eps1: f64,
    x: u64,
    primes: &PrimeTable,
) -> Result<BlockMinorant> {
    if !(b > 0.0 && eps1 > 0.0 && eps1 < 1.0) {
        return Err(Error::Contract(format!(
            "block_minorant: need b > 0 and eps1 in (0, 1), got b = {b}, eps1 = {eps1}"
        )));
    }
    if !r.is_nonnegative() {
        return Err(Error::Contract("block_minorant: r must be non-negative".into()));
    }
    if primes.bound() < x {
        return Err(Error::BoundMismatch { needed: x, have: primes.bound() });
    }
    if x < 3 {
        return Err(Error::Construction(format!("block_minorant: x = {x} too small")));
    }
    let eps2 = eps1 * eps1 * eps1;
    let log_x = (x as f64).ln();
    let step = (1.0 + eps1).ln();
    let k_lo = ((eps2 * log_x).ln() / step).ceil().max(0.0);
    let k_hi = (log_x.ln() / step - 1.0).floor();
    if k_hi < k_lo {
        return Err(Error::Construction(format!(
            "block_minorant: empty index range for x = {x}, eps1 = {eps1}"
        )));
    }
    let (k_lo, k_hi) = (k_lo as u32, k_hi as u32);

    let mut blocks = Vec::new();
    let mut values = Vec::new();
    for k in k_lo..=k_hi {
        let log_lower = (1.0 + eps1).powi(k as i32);
        let log_upper = (1.0 + eps1).powi(k as i32 + 1);
        let (lower, upper) = (log_lower.exp(), log_upper.exp());
        let lo_idx = primes.primes().partition_point(|&p| (p as f64) <= lower);
        let hi_idx = primes.primes().partition_point(|&p| (p as f64) <= upper && p <= x);
        let block_primes = &primes.primes()[lo_idx..hi_idx.max(lo_idx)];
        let weights: Vec<f64> = block_primes.iter().map(|&p| r.value(p, 1).re).collect();
        let mass = block_primes
            .iter()
            .zip(&weights)
            .map(|(&p, &w)| w * (p as f64).ln() / p as f64)
            .sum::<f64>()
            / (eps1 * log_lower);
        let ok = mass >= 4.0 * b;
        let scale = mass.max(4.0 * b);
        values.extend(
            block_primes
                .iter()
                .zip(&weights)
                .map(|(&p, &w)| (p, 2.0 * b * w / scale)),
        );
        blocks.push(Block { k, lower, upper, mass, satisfies_lower_bound: ok });
    }
    Ok(BlockMinorant {
        b,
        eps1,
        eps2,
        x,
        blocks,
        values: Arc::new(PrimeValues::new(values)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_primes;

    #[test]
    fn one_gives_about_2b_in_large_blocks() {
        let x = 1_000_000;
        let primes = build_primes(x);
        let m = block_minorant(&MultSpec::one(), 0.2, 0.05, x, &primes).unwrap();
        for block in m.blocks().iter().filter(|b| b.lower > 100.0) {
            let p = primes.primes()[primes.count_upto(block.upper as u64) - 1];
            let ratio = m.prime_value(p) / (2.0 * 0.2);
            assert!((0.8..=1.25).contains(&ratio), "block {block:?}: ratio {ratio}");
        }
    }

    #[test]
    fn never_exceeds_half_r() {
        let x = 200_000;
        let primes = build_primes(x);
        let r = MultSpec::divisor(0.7).unwrap();
        let m = block_minorant(&r, 0.3, 0.1, x, &primes).unwrap();
        for &p in primes.primes() {
            let s = m.prime_value(p);
            assert!(s >= 0.0 && s <= 0.5 * 0.7 + 1e-15, "p = {p}: s = {s}");
        }
    }

    #[test]
    fn vanishes_below_first_block() {
        let x = 1_000_000;
        let primes = build_primes(x);
        // eps1 = 0.5: eps2 log x > 1 so K starts above 0.
        let m = block_minorant(&MultSpec::one(), 0.2, 0.5, x, &primes).unwrap();
        let x_eps2 = (x as f64).powf(m.eps2());
        assert!(m.k_range().0 > 0);
        assert_eq!(m.prime_sum(x_eps2), 0.0);
    }

    #[test]
    fn empty_range_is_an_error() {
        let primes = build_primes(100);
        let r = block_minorant(&MultSpec::one(), 0.2, 0.9, 20, &primes);
        assert!(matches!(r, Err(Error::Construction(_))));
        let neg = MultSpec::bigomega_exp(num_complex::Complex64::new(-1.0, 0.0)).unwrap();
        assert!(matches!(block_minorant(&neg, 0.2, 0.1, 100, &primes), Err(Error::Contract(_))));
    }
}
