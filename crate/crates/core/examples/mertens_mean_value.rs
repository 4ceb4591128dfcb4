//! Mertens-type and comparison predictions against exact mean values.

use meanlab::funcspec::{eval_mult, MultSpec};
use meanlab::predict::{compare, lemma_2_2_ratio, predict_1_13, predict_1_6};
use meanlab::primesums::Params;
use meanlab::sieve::{build_primes, build_spf};

fn main() -> meanlab::Result<()> {
    let x_max = 10_000_000;
    let spf = build_spf(x_max)?;
    let primes = build_primes(x_max);
    let one = eval_mult(&MultSpec::one(), x_max, &spf)?;
    let sf = eval_mult(&MultSpec::squarefree(), x_max, &spf)?;

    for x in [10_000, 100_000, 1_000_000, 10_000_000] {
        let params = Params::defaults(x);
        let p6 = predict_1_6(&MultSpec::one(), &params, x, &primes)?;
        let c6 = compare(one.summatory(x)?, &p6);
        let m_r = one.summatory(x)?.re;
        let p13 = predict_1_13(&MultSpec::squarefree(), &MultSpec::one(), m_r, &params, x, &primes)?;
        let c13 = compare(sf.summatory(x)?, &p13);
        println!("x = {x:>8}  mertens rel_err {:.3e}   squarefree rel_err {:.3e}", c6.rel_err, c13.rel_err);
    }

    let x = 1_000_000;
    let params = Params::defaults(x).with_eps(0.02);
    let lr = lemma_2_2_ratio(&MultSpec::one(), &params, x, 32, &one, &primes)?;
    println!("M(z) log z / (z e^Z) in [{:.4}, {:.4}]", lr.min, lr.max);
    Ok(())
}
