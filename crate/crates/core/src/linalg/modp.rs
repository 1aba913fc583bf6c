//! Word-size arithmetic modulo odd primes below `2^62` (Montgomery form) and
//! row reduction over `F_p`.

use crate::numtheory::{inv_mod, is_prime, pow_mod, prime_factors};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont {
    pub p: u64,
    neg_inv: u64,
    r2: u64,
}

impl Mont {
    pub fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < 1 << 62);
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn inv(&self, a: u64) -> u64 {
        let plain = self.from_mont(a);
        self.to_mont(inv_mod(plain, self.p).expect("nonzero residue"))
    }
}

/// Echelon data of a matrix over `F_p`: pivot columns in increasing order
/// and, when requested, the reduced rows (Montgomery form) for each pivot.
pub(crate) struct Echelon {
    pub pivots: Vec<usize>,
    pub reduced: Option<Vec<Vec<u64>>>,
}

/// Gaussian elimination with the first nonzero entry of each column as
/// pivot. `data` is row-major in Montgomery form and is consumed.
pub(crate) fn echelon(mont: &Mont, mut data: Vec<u64>, rows: usize, cols: usize, reduce: bool) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else { continue };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = mont.inv(data[r * cols + c]);
        for j in c..cols {
            data[r * cols + j] = mont.mul(data[r * cols + j], inv);
        }
        let (head, tail) = data.split_at_mut((r + 1) * cols);
        let prow = &head[r * cols..];
        for i in 0..rows - r - 1 {
            let row = &mut tail[i * cols..(i + 1) * cols];
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                if prow[j] != 0 {
                    row[j] = mont.sub(row[j], mont.mul(f, prow[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let reduced = reduce.then(|| {
        let k = pivots.len();
        let mut rowsv: Vec<Vec<u64>> = (0..k).map(|i| data[i * cols..(i + 1) * cols].to_vec()).collect();
        for i in (0..k).rev() {
            let c = pivots[i];
            let (upper, lower) = rowsv.split_at_mut(i);
            let prow = &lower[0];
            for row in upper.iter_mut() {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    if prow[j] != 0 {
                        row[j] = mont.sub(row[j], mont.mul(f, prow[j]));
                    }
                }
            }
        }
        rowsv
    });
    Echelon { pivots, reduced }
}

/// Primes `p = 1 (mod m)` below `2^62`, descending.
pub(crate) fn primes_one_mod(m: u64) -> impl Iterator<Item = u64> {
    let step = if m % 2 == 0 { m } else { 2 * m };
    let top = ((1u64 << 62) - 2) / step;
    (1..=top).rev().map(move |k| k * step + 1).filter(|&p| is_prime(p))
}

/// A primitive `m`-th root of unity modulo `p`, where `m | p - 1`.
pub(crate) fn primitive_root_mod(m: u64, p: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let factors = prime_factors(m);
    (2..p)
        .map(|a| pow_mod(a, (p - 1) / m, p))
        .find(|&r| factors.iter().all(|&l| pow_mod(r, m / l, p) != 1))
        .expect("p = 1 mod m has primitive m-th roots")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_roundtrip() {
        let p = primes_one_mod(12).next().unwrap();
        assert_eq!(p % 12, 1);
        let m = Mont::new(p);
        let a = 123_456_789_012_345u64 % p;
        let b = p - 17;
        let prod = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
        assert_eq!(prod, ((a as u128 * b as u128) % p as u128) as u64);
        let ia = m.inv(m.to_mont(a));
        assert_eq!(m.from_mont(m.mul(ia, m.to_mont(a))), 1);
    }

    #[test]
    fn root_has_exact_order() {
        let p = primes_one_mod(8).next().unwrap();
        let r = primitive_root_mod(8, p);
        assert_eq!(pow_mod(r, 8, p), 1);
        assert_ne!(pow_mod(r, 4, p), 1);
    }
}
