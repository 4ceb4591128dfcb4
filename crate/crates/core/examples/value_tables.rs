//! Tabulating multiplicative and additive functions and their summatory functions.

use meanlab::funcspec::{eval_add, eval_mult, AddSpec, MultSpec};
use meanlab::sieve::build_spf;
use meanlab::Complex64;

fn main() -> meanlab::Result<()> {
    let x = 10_000_000;
    let spf = build_spf(x)?;

    let sf = eval_mult(&MultSpec::squarefree(), x, &spf)?;
    println!("M(10^7; mu^2) = {}", sf.summatory(x)?.re);

    let tau_half = eval_mult(&MultSpec::divisor(0.5)?, x, &spf)?;
    println!("M(10^7; tau_1/2) = {}", tau_half.summatory(x)?.re);

    let z = Complex64::new(0.5, 0.5);
    let oz = eval_mult(&MultSpec::omega_exp(z)?, x, &spf)?;
    println!("M(10^7; z^omega), z = {z} : {}", oz.summatory(x)?);

    let omega = eval_add(&AddSpec::omega(), 100, &spf)?;
    let mean = omega.summatory(100)?.re / 100.0;
    println!("mean of omega(n), n <= 100: {mean}");
    Ok(())
}
