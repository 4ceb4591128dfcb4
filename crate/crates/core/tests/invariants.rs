use std::sync::OnceLock;

use meanlab::cli::expr::parse_mult;
use meanlab::funcspec::{convolve_table, eval_mult, eval_mult_segmented, MultSpec, ValueTable};
use meanlab::moments::dist_f;
use meanlab::funcspec::AddSpec;
use meanlab::sieve::{build_primes, build_spf, factorize, PrimeTable, SpfTable};
use meanlab::Complex64;
use proptest::prelude::*;

const N: u64 = 100_000;

fn spf() -> &'static SpfTable {
    static T: OnceLock<SpfTable> = OnceLock::new();
    T.get_or_init(|| build_spf(N).unwrap())
}

fn primes() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| build_primes(N))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn leaf() -> impl Strategy<Value = MultSpec> {
    prop_oneof![
        Just(MultSpec::unit()),
        Just(MultSpec::one()),
        Just(MultSpec::squarefree()),
        (1u32..8).prop_map(|k| MultSpec::divisor(k as f64 / 4.0).unwrap()),
        (0u32..8, -2i32..3).prop_map(|(re, im)| {
            MultSpec::omega_exp(Complex64::new(re as f64 / 4.0, im as f64 / 4.0)).unwrap()
        }),
        (0u32..4).prop_map(|k| MultSpec::bigomega_exp(Complex64::new(k as f64 / 8.0, 0.0)).unwrap()),
    ]
}

fn spec() -> impl Strategy<Value = MultSpec> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), -4i32..5).prop_map(|(f, t)| MultSpec::twist(&f, t as f64 / 2.0)),
            (inner.clone(), prop::sample::select(vec![2u64, 6, 30, 35, 210])).prop_map(|(f, d)| MultSpec::coprime(&f, d).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| MultSpec::conv(&f, &g)),
            inner.clone().prop_map(|f| MultSpec::exp_extension(&f)),
            (inner.clone(), inner).prop_map(|(r, s)| MultSpec::cofactor(&r, &s)),
        ]
    })
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tables_are_multiplicative(f in spec(), pairs in prop::collection::vec((2u64..300, 2u64..300), 16)) {
        let t = eval_mult(&f, N, spf()).unwrap();
        prop_assert!(close(t.value(1), Complex64::new(1.0, 0.0), 0.0));
        for (m, n) in pairs {
            if gcd(m, n) == 1 {
                prop_assert!(close(t.value(m * n), t.value(m) * t.value(n), 1e-12), "{f} at {m}*{n}");
            }
        }
    }

    #[test]
    fn table_matches_factorization(f in spec(), n in 1u64..=N) {
        let t = eval_mult(&f, N, spf()).unwrap();
        let fac = factorize(n, spf()).unwrap();
        let direct = fac.parts().iter().fold(Complex64::new(1.0, 0.0), |acc, &(p, nu)| acc * f.value(p, nu));
        prop_assert!(close(t.value(n), direct, 1e-12));
    }

    #[test]
    fn expressions_round_trip(f in spec()) {
        let text = f.to_string();
        let back = parse_mult(&text).unwrap();
        prop_assert_eq!(back.to_string(), text.clone());
        for &p in &[2u64, 3, 5, 7, 97] {
            for nu in 0..4 {
                prop_assert!(close(back.value(p, nu), f.value(p, nu), 1e-13), "{text} at {p}^{nu}");
            }
        }
    }

    #[test]
    fn segmented_agrees(f in spec(), seg in 64usize..5000) {
        let a = eval_mult(&f, 20_000, spf()).unwrap();
        let b = eval_mult_segmented(&f, 20_000, primes(), seg).unwrap();
        for n in 1..=20_000 {
            prop_assert!(close(a.value(n), b.value(n), 1e-12));
        }
    }

    #[test]
    fn dist_f_monotone(mut zs in prop::collection::vec(-4.0f64..4.0, 2..12), x in 1000u64..20_000) {
        zs.sort_by(f64::total_cmp);
        let r = MultSpec::divisor(0.5).unwrap();
        let mut prev = 0.0;
        for z in zs {
            let v = dist_f(z, &AddSpec::omega(), &r, x, primes()).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(v >= prev);
            prev = v;
        }
    }
}

fn dirichlet_inverse(t: &ValueTable, x: u64) -> Vec<Complex64> {
    let mut inv = vec![Complex64::new(0.0, 0.0); x as usize + 1];
    inv[1] = Complex64::new(1.0, 0.0) / t.value(1);
    for n in 2..=x {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut d = 2;
        while d <= n {
            if n % d == 0 {
                acc += t.value(d) * inv[(n / d) as usize];
            }
            d += 1;
        }
        inv[n as usize] = -acc * inv[1];
    }
    inv
}

#[test]
fn cofactor_round_trip() {
    let r = MultSpec::divisor(1.5).unwrap();
    let s = MultSpec::omega_exp(Complex64::new(0.5, 0.25)).unwrap();
    let t = MultSpec::cofactor(&r, &s);
    let st = convolve_table(&eval_mult(&s, N, spf()).unwrap(), &eval_mult(&t, N, spf()).unwrap(), N).unwrap();
    let rt = eval_mult(&r, N, spf()).unwrap();
    for n in 1..=N {
        assert!(close(st.value(n), rt.value(n), 1e-9), "n = {n}");
    }
}

#[test]
fn cofactor_matches_naive_inverse() {
    // t = r * s^{-1}, with the inverse taken by the O(x^2) recursion.
    let x = 2000;
    let r = MultSpec::one();
    let s = MultSpec::divisor(0.5).unwrap();
    let s_tab = eval_mult(&s, x, spf()).unwrap();
    let inv = ValueTable::from_complex(dirichlet_inverse(&s_tab, x));
    let naive = convolve_table(&eval_mult(&r, x, spf()).unwrap(), &inv, x).unwrap();
    let t = eval_mult(&MultSpec::cofactor(&r, &s), x, spf()).unwrap();
    for n in 1..=x {
        assert!(close(t.value(n), naive.value(n), 1e-10), "n = {n}");
    }
}
