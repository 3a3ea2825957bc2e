use orthokleis::jacobi::*;
use orthokleis::lattice::catalog;
use orthokleis::orthogonal::OrthSpace;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_laws_hold_exactly(seed in any::<u64>(), name in prop::sample::select(vec!["A1", "A2", "D4"])) {
        let l = catalog(name).unwrap();
        let p = Pairing::of(&l);
        let n = l.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2, g3) = (random_jacobi(&mut rng, n, false), random_jacobi(&mut rng, n, false), random_jacobi(&mut rng, n, false));
        prop_assert_eq!(jacobi_mul(&p, &jacobi_mul(&p, &g1, &g2), &g3), jacobi_mul(&p, &g1, &jacobi_mul(&p, &g2, &g3)));
        prop_assert_eq!(jacobi_mul(&p, &g1, &jacobi_inverse(&p, &g1)), JacobiElement::identity(n));
        let (a, b) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let h = g1.h.clone();
        prop_assert_eq!(sl2_right_action(&p, &sl2_right_action(&p, &h, &a), &b), sl2_right_action(&p, &h, &a.mul(&b)));
        prop_assert_eq!(sl2_right_action(&p, &h, &Sl2::identity()), h);
    }

    #[test]
    fn embedding_is_a_homomorphism_up_to_a_central_translation(seed in any::<u64>()) {
        let space = OrthSpace::new(catalog("A2").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2) = (random_jacobi(&mut rng, 2, true), random_jacobi(&mut rng, 2, true));
        prop_assert!(in_parabolic(&space, &jacobi_embed(&space, &g1).unwrap()));
        prop_assert!(embedding_defect(&space, &g1, &g2).unwrap().is_some());
    }
}
