//! Parsing function-spec expressions and printing their canonical form.

use meanlab::cli::{parse_spec, Spec};

fn main() {
    for expr in [
        "one",
        "divisor:rho=0.5",
        "omega_exp:z=0.5,zi=-0.25",
        "twist(one, 1.0)",
        "coprime(divisor:rho=0.5,30030)",
        "conv(expext(squarefree),one)",
        "omega",
        "divisor:rho",
        "twist(one)",
        "sqarefree",
    ] {
        match parse_spec(expr) {
            Ok(Spec::Mult(f)) => println!("{expr:<34} -> {f}   f(26) = {}", f.value(2, 1) * f.value(13, 1)),
            Ok(Spec::Add(h)) => println!("{expr:<34} -> additive {h}"),
            Err(e) => println!("{expr:<34} !! {e}"),
        }
    }
}
