//! Multiplicative and additive functions defined by their values at prime powers.
//!
//! A [`MultSpec`] is a rule `(p, nu) -> f(p^nu)` with `f(1) = 1` implied; the
//! value at any `n` is the product over its factorization. Specs are cheap to
//! clone and compose: Dirichlet convolution, cofactors `t` with `s * t = r`,
//! exponential extension, twisting by `n^{-i tau}` and restriction to integers
//! coprime to a modulus all produce new specs whose prime-power values are
//! computed from the operands'.
//!
//! [`eval_mult`] and [`eval_add`] tabulate a spec on `[1, x]`; the resulting
//! [`ValueTable`] answers summatory queries `M(y; f)` for every `y <= x`.

mod additive;
mod minorant;
mod spec;
mod table;

pub use additive::AddSpec;
pub use minorant::{block_minorant, Block, BlockMinorant};
pub use spec::{MultSpec, PrimeValues};
pub use table::{
    convolve_table, eval_add, eval_mult, eval_mult_segmented, summatory, ValueTable,
};

/// `f * g` at the prime-power level.
pub fn convolve_spec(f: &MultSpec, g: &MultSpec) -> MultSpec {
    MultSpec::conv(f, g)
}

/// The exponentially multiplicative spec `s(p^nu) = s(p)^nu / nu!` built from
/// values at primes (zero at primes not listed).
pub fn exp_extension(prime_values: PrimeValues) -> MultSpec {
    MultSpec::exp_extension(&MultSpec::prime_supported(prime_values))
}

/// The spec `t` solving `s * t = r` prime power by prime power.
pub fn cofactor(r: &MultSpec, s: &MultSpec) -> MultSpec {
    MultSpec::cofactor(r, s)
}

/// `f_tau(n) = f(n) / n^{i tau}`.
pub fn twist(f: &MultSpec, tau: f64) -> MultSpec {
    MultSpec::twist(f, tau)
}

/// `f_D(n) = 1_{(n, D) = 1} f(n)`.
pub fn restrict_coprime(f: &MultSpec, modulus: u64) -> crate::Result<MultSpec> {
    MultSpec::coprime(f, modulus)
}
