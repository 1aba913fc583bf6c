use proptest::prelude::*;
use rigidity_forge::numtheory::{
    crt, discrete_log, factorize, good_primes, is_good_prime, is_prime, is_squarefree, ord_mod, pi_a, pow_mod, primitive_root,
    rho_plus, scales_search, GoodPrimeConfig, ScalesFamily,
};

/// Trial-division primality.
fn slow_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Largest prime factor, by trial division.
fn slow_rho_plus(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while n > 1 {
        while n % p == 0 {
            n /= p;
            best = p;
        }
        p += 1;
    }
    best
}

/// Largest prime power dividing `n` exactly, by trial division.
fn slow_max_prime_power(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while n > 1 {
        let mut pp = 1;
        while n % p == 0 {
            n /= p;
            pp *= p;
        }
        best = best.max(pp);
        p += 1;
    }
    best
}

proptest! {
    #[test]
    fn factorization_multiplies_back(n in 1u64..1_000_000) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.iter().map(|pp| pp.value()).product::<u64>(), n);
        prop_assert!(f.iter().all(|pp| slow_prime(pp.prime)));
        prop_assert_eq!(is_squarefree(n), f.iter().all(|pp| pp.exponent == 1));
        prop_assert_eq!(rho_plus(n).unwrap(), slow_rho_plus(n));
    }

    #[test]
    fn primality_agrees_with_trial_division(n in 0u64..200_000) {
        prop_assert_eq!(is_prime(n), slow_prime(n));
    }

    #[test]
    fn discrete_log_inverts_powering(pi in 0usize..30, e in 0u64..1000) {
        let p = (2..).filter(|&q| slow_prime(q)).nth(pi + 1).unwrap();
        let g = primitive_root(p).unwrap();
        prop_assert_eq!(ord_mod(g, p).unwrap(), p - 1);
        let t = pow_mod(g, e, p);
        prop_assert_eq!(discrete_log(g, t, p).unwrap(), e % (p - 1));
    }

    #[test]
    fn crt_meets_every_residue(x in 0u64..2310) {
        let moduli = [2u64, 3, 5, 7, 11];
        let r: Vec<u64> = moduli.iter().map(|m| x % m).collect();
        prop_assert_eq!(crt(&r, &moduli), x);
    }
}

#[test]
fn pi_matches_enumeration() {
    for (a, x, y) in [(1u64, 50u64, 5u64), (1, 200, 7), (2, 100, 10), (3, 300, 16)] {
        let expected = (a + 1..=x).filter(|&p| slow_prime(p) && slow_rho_plus(p - a) <= y).count();
        assert_eq!(pi_a(a, x, y).unwrap(), expected, "a={a} x={x} y={y}");
    }
    assert_eq!(pi_a(1, 50, 5).unwrap(), 11);
}

#[test]
fn good_primes_match_enumeration() {
    let cfg = GoodPrimeConfig::new(10, 100, 10).unwrap();
    let expected: Vec<u64> = (10..=100).filter(|&q| slow_prime(q) && slow_max_prime_power(q - 1) <= 10).collect();
    let got = good_primes(&cfg);
    assert_eq!(got, expected);
    assert!(got.contains(&41));
    assert!(!got.contains(&17));
}

#[test]
fn scales_search_lands_in_the_window_or_explains_why_not() {
    let family = ScalesFamily::relaxed();
    for k in [10u64, 30, 100, 300, 1000, 5000] {
        match scales_search(k, &family) {
            Ok(w) => {
                let kf = k as f64;
                assert!(w.n > k && (w.n as f64) < kf * kf.ln().powi(2), "k={k} n={}", w.n);
                assert_eq!(w.primes.iter().product::<u64>(), w.n);
                assert!(w.primes.iter().all(|&q| is_good_prime(q, &w.config)));
            }
            Err(fail) => assert_eq!((fail.k, fail.window.0), (k, k)),
        }
    }
}
