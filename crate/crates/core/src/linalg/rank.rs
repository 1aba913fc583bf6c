//! Exact rank.
//!
//! Over finite fields rank is computed by Gaussian elimination. Over
//! `Q(zeta_m)` the default is a certified modular method:
//!
//! * Reducing entries modulo a prime `p = 1 (mod m)` along `zeta -> r`, for a
//!   primitive `m`-th root `r` mod `p`, is a ring homomorphism, so every
//!   nonzero minor mod `p` is nonzero over `Q(zeta_m)`. The rank mod `p` is a
//!   lower bound.
//! * When that bound is below full rank, the reduced echelon form mod several
//!   primes (under every primitive root) determines candidate kernel vectors
//!   by Chinese remaindering and rational reconstruction. Each candidate is
//!   checked exactly against the integer-cleared rows; the candidates are
//!   independent, so success proves the matching upper bound.
//!
//! If reconstruction does not verify within a fixed prime budget the rank is
//! recomputed by exact elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{echelon, primes_one_mod, primitive_root_mod, Mont};
use super::ExactMatrix;
use crate::field::{CycloCtx, CycloValue, Value};
use crate::numtheory::{gcd, mul_mod, pow_mod};

/// How [`ExactMatrix::rank_with`] computes rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    /// Certified modular rank over cyclotomic fields, elimination otherwise.
    Auto,
    /// Gaussian elimination in exact field arithmetic.
    Elimination,
}

const PRIME_BUDGET: usize = 128;

pub(crate) fn rank(m: &ExactMatrix, method: RankMethod) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    match (method, m.field().cyclo_ctx()) {
        (RankMethod::Auto, Some(ctx)) => certified_rank(m, ctx).unwrap_or_else(|| elimination_rank(m)),
        _ => elimination_rank(m),
    }
}

fn elimination_rank(m: &ExactMatrix) -> usize {
    let f = m.field();
    if let (Some(p), false) = (f.order(), f.degree() > 1) {
        return prime_field_rank(m, p as u64);
    }
    if let Some(r) = small_integer_rank(m) {
        return r;
    }
    let (rows, cols) = m.shape();
    let mut data = m.data().to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&data[i * cols + c])) else { continue };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&data[r * cols + c]).expect("pivot is nonzero");
        for i in r + 1..rows {
            if f.is_zero(&data[i * cols + c]) {
                continue;
            }
            let factor = f.mul(&data[i * cols + c], &inv);
            for j in c..cols {
                let pv = &data[r * cols + j];
                if f.is_zero(pv) {
                    continue;
                }
                let t = f.mul(&factor, pv);
                data[i * cols + j] = f.sub(&data[i * cols + j], &t);
            }
        }
        r += 1;
    }
    r
}

/// Fraction-free elimination for integer matrices over `Q`, each row kept
/// primitive. `None` when an entry is not a small integer or an update
/// overflows.
fn small_integer_rank(m: &ExactMatrix) -> Option<usize> {
    if m.field().cyclotomic_order() != Some(1) {
        return None;
    }
    let (rows, cols) = m.shape();
    let mut data: Vec<i128> = m
        .data()
        .iter()
        .map(|v| {
            let c = cyclo(v);
            if !c.den.is_one() {
                return None;
            }
            c.num.first().map_or(Some(0), |x| i64::try_from(x).ok().map(i128::from))
        })
        .collect::<Option<_>>()?;
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
        let p = data[r * cols + c];
        for i in r + 1..rows {
            let a = data[i * cols + c];
            if a == 0 {
                continue;
            }
            let mut g = 0i128;
            for j in c..cols {
                let v = data[i * cols + j].checked_mul(p)?.checked_sub(data[r * cols + j].checked_mul(a)?)?;
                data[i * cols + j] = v;
                g = g.gcd(&v);
            }
            if g > 1 {
                for j in c..cols {
                    data[i * cols + j] /= g;
                }
            }
        }
        r += 1;
    }
    Some(r)
}

fn prime_field_rank(m: &ExactMatrix, p: u64) -> usize {
    let (rows, cols) = m.shape();
    let mut data: Vec<u64> = m
        .data()
        .iter()
        .map(|v| match v {
            Value::Fp(x) => *x,
            _ => unreachable!("prime field values"),
        })
        .collect();
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
        let inv = crate::numtheory::inv_mod(data[r * cols + c], p).unwrap();
        for i in r + 1..rows {
            let x = data[i * cols + c];
            if x == 0 {
                continue;
            }
            let factor = mul_mod(x, inv, p);
            for j in c..cols {
                let pv = data[r * cols + j];
                if pv != 0 {
                    data[i * cols + j] = (data[i * cols + j] + p - mul_mod(factor, pv, p)) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Gauss-Jordan elimination in exact arithmetic.
pub(crate) fn rref_generic(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let f = m.field();
    let (rows, cols) = m.shape();
    let mut data = m.data().to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&data[i * cols + c])) else { continue };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&data[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            data[r * cols + j] = f.mul(&data[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&data[i * cols + c]) {
                continue;
            }
            let factor = data[i * cols + c].clone();
            for j in c..cols {
                let pv = &data[r * cols + j];
                if f.is_zero(pv) {
                    continue;
                }
                let t = f.mul(&factor, pv);
                data[i * cols + j] = f.sub(&data[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (ExactMatrix::from_fn(f, rows, cols, |i, j| data[i * cols + j].clone()), pivots)
}

fn cyclo(v: &Value) -> &CycloValue {
    match v {
        Value::Cyclo(c) => c,
        _ => unreachable!("cyclotomic values"),
    }
}

/// Image of `m` in `F_p` (Montgomery form) under `zeta -> root`.
fn image(m: &ExactMatrix, ctx: &CycloCtx, root: u64, mont: &Mont) -> Option<Vec<u64>> {
    let p = mont.p;
    let powers: Vec<u64> = (0..ctx.phi).map(|e| pow_mod(root, e as u64, p)).collect();
    m.data()
        .iter()
        .map(|v| ctx.eval_mod(cyclo(v), &powers, p).map(|x| mont.to_mont(x)))
        .collect()
}

/// Rows scaled to integer coefficient vectors.
fn cleared_rows(m: &ExactMatrix) -> Vec<Vec<Vec<BigInt>>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(&cyclo(v).den));
            row.iter()
                .map(|v| {
                    let c = cyclo(v);
                    let s = &l / &c.den;
                    c.num.iter().map(|x| x * &s).collect()
                })
                .collect()
        })
        .collect()
}

fn rational_reconstruct(u: &BigInt, modulus: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (modulus >> 1u32).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), u.mod_floor(modulus));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    if s1.is_negative() {
        Some((-r1, -s1))
    } else {
        Some((r1, s1))
    }
}

struct Accum {
    rank: usize,
    pivots: Vec<usize>,
    free: Vec<usize>,
    modulus: BigInt,
    /// `residues[i][f][e]`: coefficient `e` of reduced-echelon entry `(i, free[f])`.
    residues: Vec<Vec<Vec<BigInt>>>,
    primes: usize,
}

/// Inverse of the Vandermonde matrix `V[t][e] = nodes[t]^e` mod `p`.
fn vandermonde_inverse(nodes: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = nodes.len();
    let mut a: Vec<Vec<u64>> = nodes
        .iter()
        .enumerate()
        .map(|(t, &x)| {
            let mut row: Vec<u64> = (0..n).map(|e| pow_mod(x, e as u64, p)).collect();
            row.extend((0..n).map(|j| u64::from(j == t)));
            row
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| a[i][c] != 0).expect("distinct nodes");
        a.swap(c, pr);
        let inv = crate::numtheory::inv_mod(a[c][c], p).unwrap();
        for j in 0..2 * n {
            a[c][j] = mul_mod(a[c][j], inv, p);
        }
        for i in 0..n {
            if i != c && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..2 * n {
                    a[i][j] = (a[i][j] + p - mul_mod(f, a[c][j], p)) % p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn certified_rank(m: &ExactMatrix, ctx: &CycloCtx) -> Option<usize> {
    let (rows, cols) = m.shape();
    let full = rows.min(cols);
    let order = ctx.m;
    let mut lower = 0usize;
    let mut acc: Option<Accum> = None;
    let mut cleared: Option<Vec<Vec<Vec<BigInt>>>> = None;
    let mut next_attempt = 1usize;

    for p in primes_one_mod(order).take(PRIME_BUDGET) {
        let mont = Mont::new(p);
        let r0 = primitive_root_mod(order, p);
        let roots: Vec<u64> = (1..=order.max(1))
            .filter(|&j| gcd(j, order) == 1)
            .map(|j| pow_mod(r0, j, p))
            .take(ctx.phi)
            .collect();

        let Some(img) = image(m, ctx, roots[0], &mont) else { continue };
        let first = echelon(&mont, img, rows, cols, true);
        lower = lower.max(first.pivots.len());
        if lower == full {
            return Some(full);
        }
        let k = first.pivots.len();
        if let Some(a) = &acc {
            if k < a.rank || (k == a.rank && first.pivots > a.pivots) {
                continue;
            }
        }

        let mut echelons = vec![first];
        let mut consistent = true;
        for &r in &roots[1..] {
            let Some(img) = image(m, ctx, r, &mont) else {
                consistent = false;
                break;
            };
            let e = echelon(&mont, img, rows, cols, true);
            lower = lower.max(e.pivots.len());
            if e.pivots != echelons[0].pivots {
                consistent = false;
                break;
            }
            echelons.push(e);
        }
        if lower == full {
            return Some(full);
        }
        if !consistent || k < lower {
            continue;
        }

        let pivots = echelons[0].pivots.clone();
        let restart = match &acc {
            None => true,
            Some(a) => k > a.rank || pivots < a.pivots,
        };
        if restart {
            let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
            acc = Some(Accum {
                rank: k,
                pivots,
                residues: vec![vec![vec![BigInt::zero(); ctx.phi]; free.len()]; k],
                free,
                modulus: BigInt::one(),
                primes: 0,
            });
            next_attempt = 1;
        }
        let a = acc.as_mut().unwrap();

        let vinv = vandermonde_inverse(&roots, p);
        let pb = BigInt::from(p);
        let minv = {
            let mres = crate::field::residue(&a.modulus, &pb, p);
            crate::numtheory::inv_mod(mres, p).expect("distinct primes")
        };
        let reduced: Vec<&Vec<Vec<u64>>> = echelons.iter().map(|e| e.reduced.as_ref().unwrap()).collect();
        for i in 0..a.rank {
            for (fi, &fc) in a.free.iter().enumerate() {
                let values: Vec<u64> = reduced.iter().map(|red| mont.from_mont(red[i][fc])).collect();
                for e in 0..ctx.phi {
                    let mut coeff = 0u128;
                    for (t, &y) in values.iter().enumerate() {
                        coeff = (coeff + vinv[e][t] as u128 * y as u128) % p as u128;
                    }
                    let target = coeff as u64;
                    let old = &mut a.residues[i][fi][e];
                    let old_mod = crate::field::residue(old, &pb, p);
                    let delta = mul_mod((target + p - old_mod) % p, minv, p);
                    if delta != 0 {
                        *old += &a.modulus * BigInt::from(delta);
                    }
                }
            }
        }
        a.modulus *= &pb;
        a.primes += 1;

        if a.primes == next_attempt {
            next_attempt *= 2;
            let rows_int = cleared.get_or_insert_with(|| cleared_rows(m));
            if verify_kernel(a, rows_int, ctx) {
                return Some(a.rank);
            }
        }
    }
    None
}

/// Reconstructs every kernel vector `e_f - sum_i x_{i,f} e_{pivot_i}` and
/// checks it against the integer rows.
fn verify_kernel(a: &Accum, rows_int: &[Vec<Vec<BigInt>>], ctx: &CycloCtx) -> bool {
    let phi = ctx.phi;
    for (fi, &fc) in a.free.iter().enumerate() {
        // Rational coefficients with a common denominator per vector.
        let mut entries: Vec<Vec<(BigInt, BigInt)>> = Vec::with_capacity(a.rank);
        for i in 0..a.rank {
            let mut coeffs = Vec::with_capacity(phi);
            for e in 0..phi {
                match rational_reconstruct(&a.residues[i][fi][e], &a.modulus) {
                    Some(nd) => coeffs.push(nd),
                    None => return false,
                }
            }
            entries.push(coeffs);
        }
        let mut den = BigInt::one();
        for coeffs in &entries {
            for (_, d) in coeffs {
                den = den.lcm(d);
            }
        }
        // support: pivot columns with -x, free column with +1 (scaled by den).
        let mut support: Vec<(usize, Vec<BigInt>)> = Vec::with_capacity(a.rank + 1);
        for (i, coeffs) in entries.iter().enumerate() {
            let poly: Vec<BigInt> = coeffs.iter().map(|(n, d)| -(n * (&den / d))).collect();
            if poly.iter().any(|c| !c.is_zero()) {
                support.push((a.pivots[i], poly));
            }
        }
        let mut unit = vec![BigInt::zero(); phi];
        unit[0] = den.clone();
        support.push((fc, unit));

        for row in rows_int {
            let mut accp = vec![BigInt::zero(); 2 * phi - 1];
            for (c, v) in &support {
                let a_rc = &row[*c];
                for (s, x) in a_rc.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (t, y) in v.iter().enumerate() {
                        if !y.is_zero() {
                            accp[s + t] += x * y;
                        }
                    }
                }
            }
            ctx.reduce(&mut accp);
            if accp.iter().any(|c| !c.is_zero()) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn rat_matrix(rows: usize, cols: usize, vals: &[i64]) -> ExactMatrix {
        let f = Field::rationals();
        ExactMatrix::from_fn(&f, rows, cols, |i, j| f.from_i64(vals[i * cols + j]))
    }

    #[test]
    fn modular_and_elimination_agree_on_deficient_rational() {
        // Rank 2: third row is the sum of the first two, fourth is 3x the first.
        let m = rat_matrix(4, 4, &[1, 2, 3, 4, 2, -1, 0, 5, 3, 1, 3, 9, 3, 6, 9, 12]);
        assert_eq!(m.rank_with(RankMethod::Elimination), 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn cyclotomic_deficient_rank() {
        let f = Field::cyclotomic(5).unwrap();
        let z = f.zeta_pow(1).unwrap();
        let row0: Vec<Value> = (0..4).map(|k| f.pow(&z, k)).collect();
        let scale = f.add(&z, &f.from_i64(2));
        let row1: Vec<Value> = row0.iter().map(|v| f.mul(v, &scale)).collect();
        let row2: Vec<Value> = (0..4).map(|k| f.from_i64(k as i64 + 1)).collect();
        let mut data = row0;
        data.extend(row1);
        data.extend(row2);
        let m = ExactMatrix::new(&f, 3, 4, data).unwrap();
        assert_eq!(m.rank_with(RankMethod::Elimination), 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn reconstruct_small_fraction() {
        let modulus = BigInt::from(1_000_000_007u64);
        let inv3 = BigInt::from(333_333_336u64);
        let u = (BigInt::from(-2) * inv3).mod_floor(&modulus);
        assert_eq!(rational_reconstruct(&u, &modulus), Some((BigInt::from(-2), BigInt::from(3))));
    }
}
