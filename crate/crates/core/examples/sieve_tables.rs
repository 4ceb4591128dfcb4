//! Prime tables, smallest-prime-factor tables and the segmented factoring pass.

use meanlab::sieve::{build_primes, build_spf, factor_segments, SpfTable};

fn main() -> meanlab::Result<()> {
    let primes = build_primes(10_000_000);
    for y in [10, 100, 10_000, 10_000_000] {
        println!("pi({y}) = {}", primes.count_upto(y));
    }

    let spf = build_spf(1_000_000)?;
    let n = 720_720;
    let fac = spf.factorize(n)?;
    println!("{n} = {:?}  omega = {}  Omega = {}", fac.parts(), fac.omega(), fac.big_omega());

    // The segmented table is identical to the linear sieve.
    let seg = SpfTable::build_segmented(1_000_000, 1 << 16)?;
    let same = (1..=1_000_000).all(|k| seg.spf(k) == spf.spf(k));
    println!("segmented spf agrees: {same}");

    // Count squarefree n <= 10^6 with only primes up to 1000 in memory.
    let small = build_primes(1000);
    let counts = factor_segments(
        1_000_000,
        1 << 16,
        &small,
        |_, len| vec![true; len],
        |sf: &mut Vec<bool>, i, _, nu| sf[i] &= nu == 1,
        |sf| sf.iter().filter(|&&b| b).count(),
    )?;
    println!("squarefree n <= 10^6: {}", counts.iter().sum::<usize>());
    Ok(())
}
