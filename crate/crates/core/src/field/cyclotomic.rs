//! Arithmetic in `Q(zeta_m)`, elements stored in the power basis modulo the
//! cyclotomic polynomial with a single common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numtheory::{euler_phi, gcd, prime_factors};

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    cyclotomic_small(m).into_iter().map(BigInt::from).collect()
}

fn mobius(n: u64) -> i32 {
    let pf = prime_factors(n);
    let mut prod = 1u64;
    for p in &pf {
        prod *= p;
    }
    if prod != n {
        0
    } else if pf.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}`.
pub(crate) fn cyclotomic_small(m: u64) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut poly: Vec<i128> = vec![1];
    for &d in &divisors {
        if mobius(m / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(m / d) == -1 {
            // Exact division by x^d - 1: q_i = p_{i+d} + q_{i+d}, from the top.
            let d = d as usize;
            let n = poly.len() - 1;
            let mut q = vec![0i128; n - d + 1];
            for i in (0..=n - d).rev() {
                let above = if i + d <= n - d { q[i + d] } else { 0 };
                q[i] = poly[i + d] + above;
            }
            poly = q;
        }
    }
    poly.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient fits i64"))
        .collect()
}

/// Element of `Q(zeta_m)`: `(sum num[i] zeta^i) / den` with `den > 0` and the
/// content of `num` coprime to `den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloValue {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

#[derive(Debug)]
pub(crate) struct CycloCtx {
    pub m: u64,
    pub phi: usize,
    /// Monic modulus, constant term first, length `phi + 1`.
    pub modulus: Vec<i64>,
}

impl CycloCtx {
    pub fn new(m: u64) -> Self {
        let modulus = cyclotomic_small(m);
        let phi = euler_phi(m) as usize;
        debug_assert_eq!(modulus.len(), phi + 1);
        Self { m, phi, modulus }
    }

    pub fn zero(&self) -> CycloValue {
        CycloValue { num: vec![BigInt::zero(); self.phi], den: BigInt::one() }
    }

    pub fn from_integer(&self, c: BigInt) -> CycloValue {
        let mut v = self.zero();
        v.num[0] = c;
        v
    }

    pub fn from_rational(&self, r: &BigRational) -> CycloValue {
        let mut v = self.zero();
        v.num[0] = r.numer().clone();
        v.den = r.denom().clone();
        normalize(&mut v);
        v
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycloValue {
        let e = k.rem_euclid(self.m as i64) as usize;
        let mut poly = vec![BigInt::zero(); e.max(self.phi - 1) + 1];
        poly[e] = BigInt::one();
        self.reduce(&mut poly);
        poly.truncate(self.phi);
        CycloValue { num: poly, den: BigInt::one() }
    }

    /// Reduces `poly` in place modulo the cyclotomic polynomial; afterwards
    /// only the first `phi` coefficients are meaningful.
    pub fn reduce(&self, poly: &mut Vec<BigInt>) {
        let phi = self.phi;
        if poly.len() <= phi {
            poly.resize(phi, BigInt::zero());
            return;
        }
        for k in (phi..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut poly[k]);
            for i in 0..phi {
                let mi = self.modulus[i];
                if mi != 0 {
                    poly[k - phi + i] -= &c * mi;
                }
            }
        }
        poly.truncate(phi);
    }

    pub fn is_zero(&self, a: &CycloValue) -> bool {
        a.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self, a: &CycloValue) -> bool {
        a.den.is_one() && a.num[0].is_one() && a.num[1..].iter().all(Zero::is_zero)
    }

    pub fn neg(&self, a: &CycloValue) -> CycloValue {
        CycloValue { num: a.num.iter().map(|c| -c).collect(), den: a.den.clone() }
    }

    pub fn add(&self, a: &CycloValue, b: &CycloValue) -> CycloValue {
        if a.den == b.den {
            let mut v = CycloValue {
                num: a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect(),
                den: a.den.clone(),
            };
            normalize(&mut v);
            return v;
        }
        let l = a.den.lcm(&b.den);
        let fa = &l / &a.den;
        let fb = &l / &b.den;
        let mut v = CycloValue {
            num: a.num.iter().zip(&b.num).map(|(x, y)| x * &fa + y * &fb).collect(),
            den: l,
        };
        normalize(&mut v);
        v
    }

    pub fn sub(&self, a: &CycloValue, b: &CycloValue) -> CycloValue {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &CycloValue, b: &CycloValue) -> CycloValue {
        let phi = self.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce(&mut prod);
        let mut v = CycloValue { num: prod, den: &a.den * &b.den };
        normalize(&mut v);
        v
    }

    pub fn scale_int(&self, a: &CycloValue, c: &BigInt) -> CycloValue {
        let mut v = CycloValue { num: a.num.iter().map(|x| x * c).collect(), den: a.den.clone() };
        normalize(&mut v);
        v
    }

    /// Inverse by the extended Euclidean algorithm against the modulus.
    pub fn inv(&self, a: &CycloValue) -> Option<CycloValue> {
        if self.is_zero(a) {
            return None;
        }
        let to_rat = |c: &BigInt| BigRational::from_integer(c.clone());
        let mut r0: Vec<BigRational> = self.modulus.iter().map(|&c| to_rat(&BigInt::from(c))).collect();
        let mut r1: Vec<BigRational> = a.num.iter().map(to_rat).collect();
        trim(&mut r1);
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !(r1.len() == 1 && !r1[0].is_zero()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                return None;
            }
        }
        let c = r1[0].clone();
        let mut num = Vec::with_capacity(self.phi);
        for i in 0..self.phi {
            num.push(s1.get(i).cloned().unwrap_or_else(BigRational::zero) / &c);
        }
        // Multiply through by the original denominator.
        let num: Vec<BigRational> = num.into_iter().map(|x| x * BigRational::from_integer(a.den.clone())).collect();
        Some(from_rationals(&num))
    }

    /// Image under `zeta -> zeta^a` for `a` coprime to `m`.
    pub fn galois(&self, v: &CycloValue, a: i64) -> CycloValue {
        let m = self.m as i64;
        let mut poly = vec![BigInt::zero(); (self.m as usize).max(self.phi)];
        for (i, c) in v.num.iter().enumerate() {
            if !c.is_zero() {
                let e = (a * i as i64).rem_euclid(m) as usize;
                poly[e] += c;
            }
        }
        self.reduce(&mut poly);
        let mut out = CycloValue { num: poly, den: v.den.clone() };
        normalize(&mut out);
        out
    }

    /// Image under the embedding `Q(zeta_m) -> Q(zeta_{m'})`, `m | m'`.
    pub fn embed(&self, v: &CycloValue, target: &CycloCtx) -> CycloValue {
        let step = (target.m / self.m) as usize;
        let mut poly = vec![BigInt::zero(); (target.m as usize).max(target.phi)];
        for (i, c) in v.num.iter().enumerate() {
            poly[(i * step) % target.m as usize] += c;
        }
        target.reduce(&mut poly);
        let mut out = CycloValue { num: poly, den: v.den.clone() };
        normalize(&mut out);
        out
    }

    /// Image in `F_p` under `zeta -> root`, or `None` when `p` divides the
    /// denominator.
    pub fn eval_mod(&self, v: &CycloValue, root_powers: &[u64], p: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let den = residue(&v.den, &pb, p);
        let den_inv = crate::numtheory::inv_mod(den, p)?;
        let mut acc: u128 = 0;
        for (c, &rp) in v.num.iter().zip(root_powers) {
            if c.is_zero() {
                continue;
            }
            let r = residue(c, &pb, p);
            acc = (acc + r as u128 * rp as u128) % p as u128;
        }
        Some(((acc * den_inv as u128) % p as u128) as u64)
    }
}

pub(crate) fn residue(c: &BigInt, pb: &BigInt, p: u64) -> u64 {
    if let Some(small) = c.to_i64() {
        return small.rem_euclid(p as i64) as u64;
    }
    let r = c.mod_floor(pb);
    r.to_u64().expect("residue below modulus")
}

pub(crate) fn normalize(v: &mut CycloValue) {
    if v.den.is_negative() {
        v.den = -std::mem::take(&mut v.den);
        for c in v.num.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    if v.num.iter().all(Zero::is_zero) {
        v.den = BigInt::one();
        return;
    }
    if v.den.is_one() {
        return;
    }
    let mut g = v.den.clone();
    for c in &v.num {
        if g.is_one() {
            return;
        }
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if !g.is_one() {
        v.den = &v.den / &g;
        for c in v.num.iter_mut() {
            if !c.is_zero() {
                *c = &*c / &g;
            }
        }
    }
}

/// Builds a normalized value from rational coefficients.
pub(crate) fn from_rationals(coeffs: &[BigRational]) -> CycloValue {
    let mut den = BigInt::one();
    for c in coeffs {
        den = den.lcm(c.denom());
    }
    let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut v = CycloValue { num, den };
    normalize(&mut v);
    v
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Smallest `m' >= 1` with `m | m'` and `n | m'`.
pub fn widen_order(m: u64, n: u64) -> u64 {
    m / gcd(m, n) * n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_105_has_a_coefficient_two() {
        let p = cyclotomic_small(105);
        assert_eq!(p.len(), 49);
        assert!(p.contains(&-2));
    }
}
