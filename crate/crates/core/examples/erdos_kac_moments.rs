//! Weighted distribution of omega(n), its Gaussian comparison and central moments.

use meanlab::funcspec::{AddSpec, MultSpec};
use meanlab::moments::{default_z_grid, ek_report, moment_g, tail_check, MomentOptions};
use meanlab::primesums::Params;
use meanlab::sieve::build_primes;

fn main() -> meanlab::Result<()> {
    let (h, r) = (AddSpec::omega(), MultSpec::one());
    let primes = build_primes(10_000_000);
    for x in [100_000, 10_000_000] {
        let params = Params::defaults(x);
        let rep = ek_report(&h, &r, x, &default_z_grid(), &params, &primes)?;
        println!("x = {x}: E = {:.4}, D = {:.4}, theta = {:.4}, sup |F - Phi| = {:.4}",
            rep.e, rep.d, rep.theta, rep.sup_distance);
        for m in moment_g(&[2, 3, 4], &h, &r, x, &params, &primes, MomentOptions::default())? {
            println!("  G_{}/D^{} = {:.4} (normal: {})", m.m, m.m, m.ratio(), m.nu_m);
        }
    }
    for t in tail_check(&[0.0, 0.5, 1.0], &h, &r, 1_000_000, &primes)? {
        println!("tail t = {}: {:.4}", t.t, t.value);
    }
    Ok(())
}
