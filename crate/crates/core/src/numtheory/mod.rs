//! Integer arithmetic: primality, factorization, smoothness counts, primitive
//! roots, discrete logarithms and multiplicative orders.
//!
//! Everything here works on `u64` and uses trial division or brute force; the
//! inputs that reach these routines are small.

mod factorable;

pub use factorable::{
    extension_degree_account, find_factorable, good_primes, is_good_prime, scales_search,
    ExtensionAccount, FactorableWitness, GoodPrimeConfig, ScalesFamily, ScalesFailure,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberTheoryError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{g} is not a primitive root modulo {p}")]
    NotPrimitive { g: u64, p: u64 },
    #[error("gcd({a}, {b}) = {gcd} is not 1")]
    NotCoprime { a: u64, b: u64, gcd: u64 },
    #[error("{0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, NumberTheoryError>;

/// A prime power `prime^exponent` with `exponent >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Factorization by trial division, primes ascending. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Result<Vec<PrimePower>> {
    if n < 1 {
        return Err(NumberTheoryError::OutOfRange("factorize needs n >= 1".into()));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push(PrimePower { prime: p, exponent: e });
        }
    };
    push(2, &mut m);
    let mut p = 3u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        out.push(PrimePower { prime: m, exponent: 1 });
    }
    Ok(out)
}

pub fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n.max(1)).unwrap_or_default().into_iter().map(|pp| pp.prime).collect()
}

/// Largest prime factor; `rho_plus(1) = 1`.
pub fn rho_plus(n: u64) -> Result<u64> {
    Ok(factorize(n)?.last().map_or(1, |pp| pp.prime))
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n.max(1)).map_or(false, |f| f.iter().all(|pp| pp.exponent == 1))
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n.max(1))
        .unwrap_or_default()
        .iter()
        .fold(n, |acc, pp| acc / pp.prime * (pp.prime - 1))
}

/// Number of primes `a < p <= x` with `rho_plus(p - a) <= y`.
pub fn pi_a(a: u64, x: u64, y: u64) -> Result<usize> {
    if a < 1 || x < a {
        return Err(NumberTheoryError::OutOfRange(format!(
            "pi_a needs a >= 1 and x >= a (a = {a}, x = {x})"
        )));
    }
    let mut count = 0;
    for p in primes_up_to(x) {
        if p > a && rho_plus(p - a)? <= y {
            count += 1;
        }
    }
    Ok(count)
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(NumberTheoryError::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&l| pow_mod(g, (p - 1) / l, p) != 1))
        .ok_or(NumberTheoryError::Infeasible(format!("no primitive root mod {p}")))
}

/// The exponent `e` in `[0, p-2]` with `g^e = t (mod p)`, by enumeration.
pub fn discrete_log(g: u64, t: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(NumberTheoryError::NotPrime(p));
    }
    if t % p == 0 {
        return Err(NumberTheoryError::OutOfRange(format!("{t} is 0 modulo {p}")));
    }
    if ord_mod(g, p)? != p - 1 {
        return Err(NumberTheoryError::NotPrimitive { g, p });
    }
    let target = t % p;
    let mut x = 1 % p;
    for e in 0..p - 1 {
        if x == target {
            return Ok(e);
        }
        x = mul_mod(x, g, p);
    }
    unreachable!("a primitive root reaches every unit")
}

/// Multiplicative order of `q` modulo `n`.
pub fn ord_mod(q: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(NumberTheoryError::OutOfRange("modulus 0".into()));
    }
    let g = gcd(q % n, n);
    if n > 1 && g != 1 {
        return Err(NumberTheoryError::NotCoprime { a: q, b: n, gcd: g });
    }
    if n == 1 {
        return Ok(1);
    }
    let mut order = euler_phi(n);
    for pf in prime_factors(order) {
        while order % pf == 0 && pow_mod(q, order / pf, n) == 1 {
            order /= pf;
        }
    }
    Ok(order)
}

/// Solution `x mod prod(m_i)` of `x = r_i mod m_i` for pairwise coprime moduli.
pub fn crt(residues: &[u64], moduli: &[u64]) -> u64 {
    let mut x = 0u64;
    let mut m = 1u64;
    for (&r, &mi) in residues.iter().zip(moduli) {
        let inv = inv_mod(m % mi, mi).expect("moduli must be pairwise coprime");
        let diff = (r % mi + mi - x % mi) % mi;
        let t = mul_mod(diff, inv, mi);
        x += m * t;
        m *= mi;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_agree_with_sieve() {
        let sieve = primes_up_to(5000);
        let by_test: Vec<u64> = (0..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, by_test);
    }

    #[test]
    fn large_primes() {
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1u64 << 61) + 1));
        assert!(is_prime(4_611_686_018_427_387_847));
    }

    #[test]
    fn crt_roundtrip() {
        for x in 0..105 {
            assert_eq!(crt(&[x % 3, x % 5, x % 7], &[3, 5, 7]), x);
        }
    }

    #[test]
    fn inverse() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
    }
}
