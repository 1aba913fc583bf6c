//! Prime fields `F_p` and extensions `F_p[x]/(f)` for an irreducible monic
//! `f`, with `p < 2^32`.

use crate::numtheory::{inv_mod, is_prime, mul_mod, prime_factors};

/// Polynomials over `F_p`, constant term first, no trailing zeros.
pub(crate) mod poly {
    use super::*;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x as u128 * y as u128;
            }
        }
        let mut out: Vec<u64> = acc.into_iter().map(|c| (c % p as u128) as u64).collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the nonzero `b`.
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divrem(a, b, p).1
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
        if r.len() < b.len() {
            return (vec![], r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() >= b.len() {
            let k = r.len() - 1 - db;
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = (r[k + i] + p - mul_mod(c, bi, p)) % p;
            }
            q[k] = c;
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = std::mem::replace(&mut y, r);
        }
        x
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), f, p)
    }

    pub fn powmod(a: &[u64], mut e: u128, f: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, f, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    /// Rabin's test for a monic `f` of degree `k >= 1`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        // x^(p^i) mod f for i = 0..=k.
        let mut frob = vec![x.clone()];
        for i in 1..=k {
            let prev = &frob[i - 1];
            frob.push(powmod(prev, p as u128, f, p));
        }
        if sub(&frob[k], &x, p).iter().any(|&c| c != 0) {
            return false;
        }
        for l in prime_factors(k as u64) {
            let g = gcd(&sub(&frob[k / l as usize], &x, p), f, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// First irreducible monic polynomial of degree `k`, scanning the lower
    /// coefficients as a base-`p` counter with the constant term least
    /// significant.
    pub fn first_irreducible(k: usize, p: u64) -> Vec<u64> {
        let mut counter = vec![0u64; k];
        loop {
            let mut f = counter.clone();
            f.push(1);
            if is_irreducible(&f, p) {
                return f;
            }
            for c in counter.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
    }
}

#[derive(Debug)]
pub(crate) struct ExtCtx {
    pub p: u64,
    pub k: usize,
    pub minpoly: Vec<u64>,
}

impl ExtCtx {
    pub fn new(p: u64, minpoly: Vec<u64>) -> Result<Self, String> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(format!("{p} is not a prime below 2^32"));
        }
        if minpoly.len() < 2 || *minpoly.last().unwrap() != 1 {
            return Err("minimal polynomial must be monic of degree >= 1".into());
        }
        if minpoly.iter().any(|&c| c >= p) {
            return Err(format!("minimal polynomial coefficients must lie in [0, {p})"));
        }
        if !poly::is_irreducible(&minpoly, p) {
            return Err(format!("{minpoly:?} is reducible over F_{p}"));
        }
        let k = minpoly.len() - 1;
        Ok(Self { p, k, minpoly })
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.k, 0);
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pad(poly::mulmod(a, b, &self.minpoly, self.p))
    }

    pub fn pow(&self, a: &[u64], e: u128) -> Vec<u64> {
        self.pad(poly::powmod(a, e, &self.minpoly, self.p))
    }

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if a.iter().all(|&c| c == 0) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// Element with index `n` in ascending representation order.
    pub fn from_index(&self, mut n: u128) -> Vec<u64> {
        let mut v = vec![0u64; self.k];
        for c in v.iter_mut() {
            *c = (n % self.p as u128) as u64;
            n /= self.p as u128;
        }
        v
    }
}
