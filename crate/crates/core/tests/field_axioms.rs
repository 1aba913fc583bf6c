use proptest::prelude::*;
use rigidity_forge::field::{Field, Value};

fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::cyclotomic(5).unwrap(),
        Field::cyclotomic(12).unwrap(),
        Field::prime(7).unwrap(),
        Field::finite_of_degree(5, 2).unwrap(),
        Field::finite_of_degree(2, 3).unwrap(),
    ]
}

/// Integer combination of the first powers of the generator.
fn element(field: &Field, coeffs: &[i64]) -> Value {
    let gen = match field.cyclotomic_order() {
        Some(m) if m > 1 => field.zeta_pow(1).unwrap(),
        _ if field.is_finite() && field.degree() > 1 => field.ext_generator().unwrap(),
        _ => field.from_i64(3),
    };
    let mut acc = field.zero();
    let mut power = field.one();
    for &c in coeffs {
        acc = field.add(&acc, &field.mul_int(&power, c));
        power = field.mul(&power, &gen);
    }
    acc
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..20, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(fi in 0usize..6, a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = &fields()[fi];
        let (a, b, c) = (element(f, &a), element(f, &b), element(f, &c));
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a);
    }

    #[test]
    fn inverses(fi in 0usize..6, a in coeffs()) {
        let f = &fields()[fi];
        let a = element(f, &a);
        prop_assume!(!f.is_zero(&a));
        let inv = f.inv(&a).unwrap();
        prop_assert!(f.is_one(&f.mul(&a, &inv)));
        prop_assert_eq!(f.pow_signed(&a, -2).unwrap(), f.mul(&inv, &inv));
    }

    #[test]
    fn encoding_roundtrips(fi in 0usize..6, a in coeffs()) {
        let f = &fields()[fi];
        let a = element(f, &a);
        prop_assert_eq!(f.decode(&f.encode(&a)).unwrap(), a);
    }

    #[test]
    fn frobenius_is_a_ring_map(fi in 4usize..6, a in coeffs(), b in coeffs()) {
        let f = &fields()[fi];
        let (a, b) = (element(f, &a), element(f, &b));
        let fr = |x: &Value| f.frobenius(x).unwrap();
        prop_assert_eq!(fr(&f.add(&a, &b)), f.add(&fr(&a), &fr(&b)));
        prop_assert_eq!(fr(&f.mul(&a, &b)), f.mul(&fr(&a), &fr(&b)));
        let conj = f.frobenius_conjugates(&a).unwrap();
        prop_assert!(f.degree() % conj.len() == 0);
    }

    #[test]
    fn subfield_embedding_is_a_ring_map(a in coeffs(), b in coeffs()) {
        let small = Field::cyclotomic(3).unwrap();
        let big = Field::cyclotomic(15).unwrap();
        let (a, b) = (element(&small, &a), element(&small, &b));
        let e = |x: &Value| small.embed(x, &big).unwrap();
        prop_assert_eq!(e(&small.mul(&a, &b)), big.mul(&e(&a), &e(&b)));
        prop_assert_eq!(big.restrict(&e(&a), &small).unwrap(), a);
    }
}

#[test]
fn roots_of_unity_have_exact_order() {
    for (f, n) in [(Field::cyclotomic(12).unwrap(), 12), (Field::prime(13).unwrap(), 12), (Field::finite_of_degree(5, 2).unwrap(), 8)] {
        let w = f.primitive_root_of_unity(n).unwrap().value;
        assert!(f.is_one(&f.pow(&w, n as u128)));
        for d in 1..n {
            if n % d == 0 {
                assert!(!f.is_one(&f.pow(&w, d as u128)), "order divides {d}");
            }
        }
    }
}

#[test]
fn missing_roots_are_refused() {
    assert!(Field::prime(7).unwrap().primitive_root_of_unity(5).is_err());
    assert!(!Field::rationals().has_root_of_unity(3));
}
