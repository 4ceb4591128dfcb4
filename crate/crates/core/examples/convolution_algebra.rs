//! Dirichlet convolution, cofactors, exponential extension and the block minorant.

use meanlab::funcspec::{block_minorant, convolve_table, eval_mult, MultSpec};
use meanlab::sieve::{build_primes, build_spf};

fn main() -> meanlab::Result<()> {
    let x = 100_000;
    let spf = build_spf(x)?;
    let primes = build_primes(1_000_000);

    // 1 * 1 is the divisor function.
    let one = eval_mult(&MultSpec::one(), x, &spf)?;
    let tau = convolve_table(&one, &one, x)?;
    println!("tau(720) = {}", tau.value(720).re);

    // s = exp_extension of the block minorant of r = 1, t = r / s.
    let m = block_minorant(&MultSpec::one(), 0.2, 0.05, 1_000_000, &primes)?;
    println!("blocks {:?}, {} short blocks", m.k_range(), m.violations().count());
    let s = m.exp_extension();
    let t = MultSpec::cofactor(&MultSpec::one(), &s);
    let back = convolve_table(&eval_mult(&s, x, &spf)?, &eval_mult(&t, x, &spf)?, x)?;
    let err = (1..=x).map(|n| (back.value(n).re - 1.0).abs()).fold(0.0, f64::max);
    println!("max |s * t - 1| on [1, {x}] = {err:e}");

    let z = m.prime_sum(1_000_000.0);
    println!("Z(x; s) = {z}, 2b log(1/eps2) = {}", 2.0 * 0.2 * (1.0 / m.eps2()).ln());
    Ok(())
}
