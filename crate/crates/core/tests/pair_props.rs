use proptest::prelude::*;

use latpair::constructors::{
    cascade_pair, coprime_pair, diagonal_pair, unipotent_pair, CascadeParams, CoprimeParams,
    DiagParams,
};
use latpair::exactlin::{Matrix, Scalar};
use latpair::goodpair::{check_witness, transport_witness, WitnessCandidate};
use latpair::lattice::{lattices_equal, Lattice, LatticePair};
use latpair::oracle::{
    mc_tiling_check, random_integral_unimodular, rng_from_seed, tiling_count_at, McConfig,
};

fn param() -> impl Strategy<Value = Scalar> {
    (1i64..=7, 1i64..=7, any::<bool>()).prop_map(|(n, d, neg)| {
        let x = Scalar::from_ratio(n, d);
        if neg { -x } else { x }
    })
}

fn invertible(d: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec((-3i64..=3, 1i64..=3), d * d)
        .prop_map(move |v| {
            let entries: Vec<Scalar> = v.iter().map(|&(n, q)| Scalar::from_ratio(n, q)).collect();
            Matrix::from_rows(entries.chunks(d).map(<[Scalar]>::to_vec).collect()).unwrap()
        })
        .prop_filter("nonsingular", |m| !m.det().is_zero())
}

fn nonzero_int() -> impl Strategy<Value = i64> {
    prop_oneof![-6i64..=-1, 1i64..=6]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_images_keep_witnesses(p in proptest::collection::vec(param(), 2), a in invertible(3)) {
        let cp = cascade_pair(&CascadeParams { p, left: None, right: None }).unwrap();
        let moved = LatticePair::from_bases(
            a.mat_mul(cp.pair.gamma1().basis()).unwrap(),
            a.mat_mul(cp.pair.gamma2().basis()).unwrap(),
        ).unwrap();
        let w = transport_witness(&cp.witness, &a).unwrap();
        prop_assert!(check_witness(&w, &moved).unwrap().passed());
    }

    #[test]
    fn verdict_ignores_choice_of_basis(p in proptest::collection::vec(param(), 2), seed in 0u64..500, shift in -2i64..=2) {
        let cp = cascade_pair(&CascadeParams { p, left: None, right: None }).unwrap();
        let mut rng = rng_from_seed(seed);
        let u = random_integral_unimodular(&mut rng, 3, 6, 3);
        let v = random_integral_unimodular(&mut rng, 3, 6, 3);
        let rebased = LatticePair::from_bases(
            cp.pair.gamma1().basis().mat_mul(&u).unwrap(),
            cp.pair.gamma2().basis().mat_mul(&v).unwrap(),
        ).unwrap();
        prop_assert!(check_witness(&cp.witness, &rebased).unwrap().passed());

        let mut bent = cp.witness.n.clone();
        let corner = bent.get(0, 0) + &Scalar::from_ratio(shift, 5);
        bent.set(0, 0, corner).unwrap();
        let bent = WitnessCandidate::new(bent);
        prop_assert_eq!(
            check_witness(&bent, &cp.pair).unwrap().passed(),
            check_witness(&bent, &rebased).unwrap().passed()
        );
    }

    #[test]
    fn swapping_the_lattices_keeps_the_verdict(p in proptest::collection::vec(param(), 2), shift in -3i64..=3) {
        let cp = cascade_pair(&CascadeParams { p, left: None, right: None }).unwrap();
        prop_assert!(check_witness(&cp.witness, &cp.pair.swapped()).unwrap().passed());
        let mut bent = cp.witness.n.clone();
        let corner = bent.get(2, 2) + &Scalar::from_ratio(shift, 4);
        bent.set(2, 2, corner).unwrap();
        let bent = WitnessCandidate::new(bent);
        prop_assert_eq!(
            check_witness(&bent, &cp.pair).unwrap().passed(),
            check_witness(&bent, &cp.pair.swapped()).unwrap().passed()
        );
    }

    #[test]
    fn diagonal_and_cascade_share_a_lattice(m in proptest::collection::vec(nonzero_int(), 1..=3)) {
        let diag = diagonal_pair(&DiagParams { m: m.clone(), left: None, right: None }).unwrap();
        let p: Vec<Scalar> = m.iter().map(|&x| Scalar::from_ratio(1, x)).collect();
        let casc = cascade_pair(&CascadeParams { p, left: None, right: None }).unwrap();
        prop_assert!(lattices_equal(diag.pair.gamma1(), casc.pair.gamma1()));
        prop_assert_eq!(&diag.witness, &casc.witness);
    }

    #[test]
    fn coprime_pairs_pass(m in nonzero_int(), n in nonzero_int()) {
        prop_assume!(num_integer::gcd(m, n) == 1);
        let cp = coprime_pair(&CoprimeParams { m, n, left: None, right: None }).unwrap();
        prop_assert!(check_witness(&cp.witness, &cp.pair).unwrap().passed());
    }

    #[test]
    fn unipotent_pairs_pass(t in proptest::collection::vec(param(), 3), seed in 0u64..500) {
        let mut rows = vec![vec![Scalar::zero(); 3]; 3];
        for i in 0..3 {
            rows[i][i] = Scalar::one();
        }
        rows[0][1] = t[0].clone();
        rows[0][2] = t[1].clone();
        rows[1][2] = t[2].clone();
        let t = Matrix::from_rows(rows).unwrap();
        let mut rng = rng_from_seed(seed);
        let p = random_integral_unimodular(&mut rng, 3, 5, 3);
        let q = random_integral_unimodular(&mut rng, 3, 5, 3);
        prop_assert!(unipotent_pair(&t, &p, &q).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monte_carlo_is_deterministic(p in proptest::collection::vec(param(), 1), seed in any::<u64>()) {
        let cp = cascade_pair(&CascadeParams { p, left: None, right: None }).unwrap();
        let cfg = McConfig::new(64, seed, 31);
        for latt in [cp.pair.gamma1(), cp.pair.gamma2()] {
            let a = mc_tiling_check(&cp.witness, latt, &cfg).unwrap();
            let b = mc_tiling_check(&cp.witness, latt, &cfg).unwrap();
            prop_assert!(a.passed());
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn monte_carlo_flags_a_double_cover() {
    let w = WitnessCandidate::new(Matrix::from_ints(&[&[2, 0], &[0, 1]]));
    let latt = Lattice::standard(2);
    let report = mc_tiling_check(&w, &latt, &McConfig::new(50, 3, 17)).unwrap();
    assert!(!report.passed());
    let x = vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 3)];
    assert_eq!(tiling_count_at(&w, &latt, &x).unwrap().ks.len(), 2);
}
