mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidity_forge::field::{Field, Value};
use rigidity_forge::linalg::{mixed_product_check, ExactMatrix, RankMethod};

fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::cyclotomic(7).unwrap(),
        Field::prime(7).unwrap(),
        Field::finite_of_degree(3, 2).unwrap(),
    ]
}

/// Determinant by cofactor expansion along the first row.
fn det(f: &Field, m: &[Vec<Value>]) -> Value {
    if m.is_empty() {
        return f.one();
    }
    let mut acc = f.zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<Value>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = f.mul(&m[0][j], &det(f, &minor));
        acc = if j % 2 == 0 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
        s.push(last);
        s
    })).collect()
}

/// Largest `k` with a nonzero `k x k` minor.
fn minor_rank(m: &ExactMatrix) -> usize {
    let f = m.field();
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                let sub: Vec<Vec<Value>> = rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
                if !f.is_zero(&det(f, &sub)) {
                    return k;
                }
            }
        }
    }
    0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rank_matches_minor_oracle(fi in 0usize..4, rows in 1usize..5, cols in 1usize..5, k in 0usize..4, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::low_rank(f, rows, cols, k, &mut rng);
        let r = minor_rank(&m);
        prop_assert!(r <= k);
        prop_assert_eq!(m.rank(), r);
        prop_assert_eq!(m.rank_with(RankMethod::Elimination), r);
        prop_assert_eq!(m.transpose().rank(), r);
    }

    #[test]
    fn modular_rank_agrees_with_elimination(rows in 1usize..9, cols in 1usize..9, k in 0usize..6, seed: u64) {
        let f = Field::cyclotomic(12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::low_rank(&f, rows, cols, k, &mut rng);
        prop_assert_eq!(m.rank_with(RankMethod::Auto), m.rank_with(RankMethod::Elimination));
    }

    #[test]
    fn large_integer_entries_keep_exact_rank(rows in 1usize..6, cols in 1usize..6, k in 0usize..4, seed: u64) {
        // Entries near 2^62 overflow the fraction-free fast path.
        let q = Field::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = ExactMatrix::from_fn(&q, rows, k, |_, _| q.from_i64(rng.gen_range(-(1i64 << 62)..(1i64 << 62))));
        let v = ExactMatrix::from_fn(&q, k, cols, |_, _| q.from_i64(rng.gen_range(-3..=3)));
        let m = u.mul(&v).unwrap();
        prop_assert_eq!(m.rank_with(RankMethod::Elimination), minor_rank(&m));
    }

    #[test]
    fn kronecker_rank_is_multiplicative(fi in 0usize..4, ka in 0usize..3, kb in 0usize..3, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::low_rank(f, 3, 3, ka, &mut rng);
        let b = common::low_rank(f, 3, 2, kb, &mut rng);
        prop_assert_eq!(a.kronecker(&b).unwrap().rank(), a.rank() * b.rank());
    }

    #[test]
    fn mixed_product_holds(fi in 0usize..4, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::matrix(f, 2, 3, &mut rng);
        let b = common::matrix(f, 2, 2, &mut rng);
        let c = common::matrix(f, 3, 2, &mut rng);
        let d = common::matrix(f, 2, 3, &mut rng);
        prop_assert!(mixed_product_check(&a, &b, &c, &d).unwrap());
    }

    #[test]
    fn solve_returns_a_solution(fi in 0usize..4, rows in 1usize..5, cols in 1usize..5, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::matrix(f, rows, cols, &mut rng);
        let x0: Vec<Value> = (0..cols).map(|_| common::value(f, &mut rng)).collect();
        let b = m.mul_vec(&x0);
        let x = m.solve(&b, None).unwrap();
        prop_assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn rank_is_subadditive(fi in 0usize..4, ka in 0usize..3, kb in 0usize..3, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::low_rank(f, 4, 4, ka, &mut rng);
        let b = common::low_rank(f, 4, 4, kb, &mut rng);
        prop_assert!(a.add(&b).unwrap().rank() <= a.rank() + b.rank());
    }
}
