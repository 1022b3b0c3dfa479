use num_bigint::BigInt;
use proptest::prelude::*;

use latpair::exactlin::{hnf, Matrix, Scalar};
use latpair::lattice::{lattices_equal, Lattice};
use latpair::oracle::{random_integral_unimodular, rng_from_seed};

fn rational() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Scalar::from_ratio(n, d))
}

fn quadratic(r: u64) -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6).prop_map(move |(a, b, c, d)| {
        Scalar::from_ratio(a, b) + Scalar::from_ratio(c, d) * Scalar::sqrt_of(r)
    })
}

fn rational_matrix(d: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(rational(), d * d).prop_map(move |v| {
        Matrix::from_rows(v.chunks(d).map(<[Scalar]>::to_vec).collect()).unwrap()
    })
}

fn quadratic_matrix(d: usize, r: u64) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(quadratic(r), d * d).prop_map(move |v| {
        Matrix::from_rows(v.chunks(d).map(<[Scalar]>::to_vec).collect()).unwrap()
    })
}

fn int_matrix(d: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-5i64..=5, d * d).prop_map(move |v| {
        let rows: Vec<&[i64]> = v.chunks(d).collect();
        Matrix::from_ints(&rows)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_two_sided(a in rational_matrix(3)) {
        prop_assume!(!a.det().is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!(a.mat_mul(&inv).unwrap().is_identity());
        prop_assert!(inv.mat_mul(&a).unwrap().is_identity());
    }

    #[test]
    fn quadratic_inverse_is_two_sided(a in quadratic_matrix(2, 3)) {
        prop_assume!(!a.det().is_zero());
        prop_assert!(a.mat_mul(&a.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn det_is_multiplicative(a in rational_matrix(3), b in rational_matrix(3)) {
        prop_assert_eq!(a.mat_mul(&b).unwrap().det(), &a.det() * &b.det());
    }

    #[test]
    fn det_of_kronecker(a in rational_matrix(2), b in rational_matrix(3)) {
        let lhs = a.kronecker(&b).unwrap().det();
        let da = a.det();
        let db = b.det();
        let rhs = &(&(&da * &da) * &da) * &(&db * &db);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sign_agrees_with_floats(x in quadratic(2), y in quadratic(5)) {
        for s in [x, y] {
            let f = s.to_f64();
            if f.abs() > 1e-9 {
                prop_assert_eq!(s.is_positive(), f > 0.0);
                prop_assert_eq!(s.is_negative(), f < 0.0);
            }
            let count = [s.is_positive(), s.is_negative(), s.is_zero()].iter().filter(|&&b| b).count();
            prop_assert_eq!(count, 1);
        }
    }

    #[test]
    fn floor_brackets_value(x in quadratic(7)) {
        let fl = Scalar::from_bigint(x.floor());
        prop_assert!(fl <= x);
        prop_assert!(x < &fl + &Scalar::one());
        prop_assert_eq!(x.ceil(), -(-&x).floor());
    }

    #[test]
    fn field_operations_round_trip(x in quadratic(3), y in quadratic(3)) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }

    #[test]
    fn hnf_is_idempotent_and_basis_invariant(a in int_matrix(3), seed in 0u64..1000) {
        prop_assume!(!a.det().is_zero());
        let h = hnf(&a).unwrap();
        prop_assert_eq!(hnf(&h).unwrap(), h.clone());
        prop_assert!(h.is_lower_triangular());
        let mut rng = rng_from_seed(seed);
        let u = random_integral_unimodular(&mut rng, 3, 8, 4);
        prop_assert_eq!(hnf(&a.mat_mul(&u).unwrap()).unwrap(), h);
    }

    #[test]
    fn lattice_equality_is_an_equivalence(a in int_matrix(3), seed in 0u64..1000) {
        prop_assume!(!a.det().is_zero());
        let mut rng = rng_from_seed(seed);
        let u = random_integral_unimodular(&mut rng, 3, 6, 4);
        let v = random_integral_unimodular(&mut rng, 3, 6, 4);
        let la = Lattice::new(a.clone()).unwrap();
        let lb = Lattice::new(a.mat_mul(&u).unwrap()).unwrap();
        let lc = Lattice::new(a.mat_mul(&u).unwrap().mat_mul(&v).unwrap()).unwrap();
        prop_assert!(lattices_equal(&la, &la));
        prop_assert!(lattices_equal(&la, &lb) && lattices_equal(&lb, &la));
        prop_assert!(lattices_equal(&lb, &lc) && lattices_equal(&la, &lc));
        let doubled = Lattice::new(a.scale(&Scalar::from_int(2)).unwrap()).unwrap();
        prop_assert!(!lattices_equal(&la, &doubled));
    }

    #[test]
    fn lattice_equality_matches_hnf(a in int_matrix(2), b in int_matrix(2)) {
        prop_assume!(!a.det().is_zero() && !b.det().is_zero());
        let same = hnf(&a).unwrap() == hnf(&b).unwrap();
        let la = Lattice::new(a).unwrap();
        let lb = Lattice::new(b).unwrap();
        prop_assert_eq!(lattices_equal(&la, &lb), same);
    }
}

#[test]
fn hnf_of_known_lattice() {
    let a = Matrix::from_ints(&[&[2, 4], &[0, 6]]);
    let h = hnf(&a).unwrap();
    assert_eq!(h.get(0, 0).to_integer(), Some(BigInt::from(2)));
    assert!(h.is_lower_triangular());
    assert_eq!(h.det().abs(), Scalar::from_int(12));
}
