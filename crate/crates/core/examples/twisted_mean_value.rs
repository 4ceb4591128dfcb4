//! The twisted comparison formula on f(n) = n^{i tau}.

use meanlab::funcspec::{eval_mult, MultSpec};
use meanlab::predict::{compare, predict_2_3};
use meanlab::primesums::Params;
use meanlab::sieve::{build_primes, build_spf};

fn main() -> meanlab::Result<()> {
    let x = 1_000_000;
    let tau = 1.0;
    let f = MultSpec::twist(&MultSpec::one(), -tau);
    let spf = build_spf(x)?;
    let primes = build_primes(x);
    let observed = eval_mult(&f, x, &spf)?.summatory(x)?;
    let m_r = x as f64;
    let pred = predict_2_3(&f, &MultSpec::one(), tau, m_r, &Params::defaults(x), x, &primes)?;
    let c = compare(observed, &pred);
    println!("observed  {observed}");
    println!("predicted {}", pred.main_term);
    println!("modulus ratio {:.6}, phase gap {:.2e} rad", observed.norm() / pred.main_term.norm(),
        (observed / pred.main_term).arg());
    println!("rel_err {:.3e}", c.rel_err);
    Ok(())
}
