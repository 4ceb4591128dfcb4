//! Running the hypothesis sets of the mean-value theorems for a pair (f, r).

use meanlab::funcspec::MultSpec;
use meanlab::primesums::{Hypotheses, Params, Theorem};
use meanlab::sieve::build_primes;

fn main() -> meanlab::Result<()> {
    let x = 1_000_000;
    let primes = build_primes(x);
    let params = Params::defaults(x);
    println!("params: {}", serde_json::to_string(&params)?);

    let f = MultSpec::squarefree();
    let r = MultSpec::one();
    let hyp = Hypotheses::new(&params, &f, &r, x, &primes)?;
    for theorem in [Theorem::MertensType, Theorem::Comparison, Theorem::Sifted] {
        println!("{theorem:?}");
        for rep in hyp.theorem_set(theorem)? {
            println!("  {}", rep.csv_row());
        }
    }
    Ok(())
}
