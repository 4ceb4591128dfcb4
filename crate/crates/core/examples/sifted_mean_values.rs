//! Sifted mean values M(x; r_D) for primorial moduli and the two error exponents.

use meanlab::funcspec::{eval_mult, MultSpec};
use meanlab::predict::{compare, predict_4_5};
use meanlab::primesums::Params;
use meanlab::sieve::build_spf;

fn main() -> meanlab::Result<()> {
    let x = 10_000_000;
    let spf = build_spf(x)?;
    let r = MultSpec::one();
    let params = Params::defaults(x);
    let mut d = 1u64;
    for p in [1u64, 2, 3, 5, 7, 11, 13, 17, 19] {
        d *= p;
        let observed = eval_mult(&MultSpec::coprime(&r, d)?, x, &spf)?.summatory(x)?;
        let pred = predict_4_5(&r, d, x as f64, &params, x)?;
        let c = compare(observed, &pred);
        let s = pred.sifted.as_ref().expect("sifted terms");
        println!("D = {d:>8}  W = {:>8.4}  chi = {}  rel_err = {:.2e}", s.w, s.chi, c.rel_err);
    }
    let s = predict_4_5(&r, 30030, x as f64, &params, x)?.sifted.expect("sifted terms");
    println!("exponent delta/2 = {:.6e} vs Elliott's c = {:.6e}", s.delta / 2.0, s.c.unwrap_or(f64::NAN));
    Ok(())
}
