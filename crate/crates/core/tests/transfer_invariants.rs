mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidity_forge::certify::{
    binomial_split, diagonalization_transfer, kronecker_transfer, sandwich_transfer, verify, Certificate, Provenance,
    Side, SplitPart,
};
use rigidity_forge::field::{Field, Value};
use rigidity_forge::linalg::ExactMatrix;
use rigidity_forge::structured::{MatrixDescriptor, MatrixKind};

fn fields() -> Vec<Field> {
    vec![Field::rationals(), Field::prime(7).unwrap(), Field::cyclotomic(3).unwrap()]
}

/// `L + E` with `rank(L) <= r` and `E` `s`-sparse, and its certificate.
fn planted(field: &Field, n: usize, r: usize, s: usize, rng: &mut ChaCha8Rng) -> Certificate {
    let low = common::low_rank(field, n, n, r, rng);
    let e = common::sparse(field, n, s, rng);
    let m = low.apply_changes(&e, false).unwrap();
    let desc = MatrixDescriptor::new(MatrixKind::Explicit { rows: n, cols: n, data: m.into_data() }, field);
    Certificate::new(desc, field, e, r, s, Provenance::new("planted")).unwrap()
}

fn diagonal(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Value> {
    (0..n).map(|_| common::value(field, rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn diagonal_transfer_doubles_rank_and_squares_sparsity(
        fi in 0usize..3, n in 2usize..9, r in 0usize..3, s in 0usize..3, adjoint: bool, seed: u64,
    ) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = planted(f, n, r, s, &mut rng);
        prop_assert!(verify(&a).passed());
        let d = diagonal(f, n, &mut rng);
        let side = if adjoint { Side::Adjoint } else { Side::Same };
        let b = diagonalization_transfer(&a, &d, side, None).unwrap();
        let report = verify(&b);
        prop_assert!(report.passed(), "{}", report.summary());
        prop_assert!(b.claimed_rank <= 2 * a.claimed_rank);
        prop_assert!(b.claimed_regular_sparsity <= a.claimed_regular_sparsity.pow(2));
        prop_assert!(report.achieved_sparsity.regular() <= s * s);
    }

    #[test]
    fn sandwich_transfer_adds_ranks(fi in 0usize..3, n in 2usize..8, rx in 0usize..3, ry in 0usize..3, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = planted(f, n, rx, 1, &mut rng);
        let y = planted(f, n, ry, 2, &mut rng);
        let d = diagonal(f, n, &mut rng);
        let c = sandwich_transfer(&x, &d, &y, None).unwrap();
        prop_assert!(verify(&c).passed());
        prop_assert!(c.claimed_rank <= rx + ry);
        prop_assert!(c.claimed_regular_sparsity <= 2);
    }

    #[test]
    fn kronecker_transfer_bounds(fi in 0usize..3, na in 2usize..5, nb in 2usize..5, ra in 0usize..2, rb in 0usize..2, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = planted(f, na, ra, 1, &mut rng);
        let b = planted(f, nb, rb, 2, &mut rng);
        let k = kronecker_transfer(&a, &b).unwrap();
        let report = verify(&k);
        prop_assert!(report.passed(), "{}", report.summary());
        prop_assert!(k.claimed_rank <= (ra * nb + rb * na).min(na * nb));
        prop_assert!(k.claimed_regular_sparsity <= 2);
        // Independent check: (A - E_A) (x) B + E_A (x) (B - E_B).
        let (ma, mb) = (a.realize().unwrap(), b.realize().unwrap());
        let la = ma.apply_changes(&a.changes, true).unwrap();
        let lb = mb.apply_changes(&b.changes, true).unwrap();
        let split = la.kronecker(&mb).unwrap().add(&a.changes.to_dense().kronecker(&lb).unwrap()).unwrap();
        prop_assert_eq!(split, k.residual().unwrap());
    }

    #[test]
    fn binomial_split_reassembles(fi in 0usize..2, b in 1usize..4, l_off in 0usize..3, seed: u64) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parts: Vec<SplitPart> = (0..b)
            .map(|_| {
                let low = common::low_rank(f, 3, 3, 1, &mut rng);
                SplitPart { low, sparse: common::sparse(f, 3, 1, &mut rng), rank: 1 }
            })
            .collect();
        let l = (l_off % b) + 1;
        let split = binomial_split(&parts, l).unwrap();
        let full = parts.iter().fold(ExactMatrix::identity(f, 1), |acc, p| {
            acc.kronecker(&p.low.apply_changes(&p.sparse, false).unwrap()).unwrap()
        });
        let low = split.low_rank_sum(&parts).unwrap();
        prop_assert_eq!(low.apply_changes(&split.sparse, false).unwrap(), full);
        prop_assert!(low.rank() <= split.rank_bound);
        prop_assert!(split.sparse.sparsity().regular() <= split.sparsity_bound);
    }
}

#[test]
fn tampered_claims_fail_verification() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let q = Field::rationals();
    let good = planted(&q, 6, 2, 1, &mut rng);
    assert!(verify(&good).passed());
    let residual_rank = good.residual().unwrap().rank();
    let mut low = good.clone();
    low.claimed_rank = residual_rank - 1;
    assert!(!verify(&low).rank_ok);
    let mut thin = good;
    thin.claimed_regular_sparsity = 0;
    assert!(!verify(&thin).sparsity_ok);
}
