#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rigidity_forge::field::{Field, Value};
use rigidity_forge::linalg::{ExactMatrix, SparseChanges};

/// Small integer combination of powers of the field's generator.
pub fn value(field: &Field, rng: &mut ChaCha8Rng) -> Value {
    let gen = match field.cyclotomic_order() {
        Some(m) if m > 1 => field.zeta_pow(1).unwrap(),
        _ if field.is_finite() && field.degree() > 1 => field.ext_generator().unwrap(),
        _ => field.one(),
    };
    let mut acc = field.zero();
    let mut power = field.one();
    for _ in 0..field.degree().min(3) {
        acc = field.add(&acc, &field.mul_int(&power, rng.gen_range(-4..=4)));
        power = field.mul(&power, &gen);
    }
    acc
}

pub fn matrix(field: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    ExactMatrix::from_fn(field, rows, cols, |_, _| value(field, rng))
}

/// `U V` with inner dimension `k`, so rank at most `k`.
pub fn low_rank(field: &Field, rows: usize, cols: usize, k: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    matrix(field, rows, k, rng).mul(&matrix(field, k, cols, rng)).unwrap()
}

/// Changes with at most `s` entries in every row and column.
pub fn sparse(field: &Field, n: usize, s: usize, rng: &mut ChaCha8Rng) -> SparseChanges {
    let mut e = SparseChanges::empty(field, n, n);
    // Each pass fills one wrapped diagonal, a permutation pattern.
    for _ in 0..s {
        let offset = rng.gen_range(0..n);
        for i in 0..n {
            let v = value(field, rng);
            let j = (i + offset) % n;
            if e.get(i, j).is_none() && !field.is_zero(&v) {
                e.set(i, j, v);
            }
        }
    }
    e
}
