use num_complex::Complex64;
use orthokleis::lattice::{catalog, GramLattice};
use orthokleis::siegel::eisenstein::{siegel_coset_reps, siegel_eisenstein_with, translate_pair};
use orthokleis::siegel::SiegelPoint;
use orthokleis::special::assembly::{dirichlet_sum, modified_siegel_reflection, orthogonal_group_order};
use orthokleis::special::cubature::p2_integral_check;
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn siegel_series_is_translation_invariant_on_matched_classes() {
    let z = SiegelPoint::new(Complex64::new(0.1, 1.2), Complex64::new(-0.3, 0.9), Complex64::new(0.05, 0.2)).unwrap();
    let s = Complex64::new(2.5, 0.4);
    let reps = siegel_coset_reps(2);
    for t in [[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[1, 1], [1, -1]]] {
        let shifted: Vec<_> = reps.iter().map(|cd| translate_pair(cd, t)).collect();
        let zt = SiegelPoint::new(z.z[0] + t[0][0] as f64, z.z[1] + t[1][1] as f64, z.z[2] + t[0][1] as f64).unwrap();
        let a = siegel_eisenstein_with(&zt, s, &reps).unwrap();
        let b = siegel_eisenstein_with(&z, s, &shifted).unwrap();
        assert!((a - b).norm() <= 1e-12 * b.norm(), "{t:?}: {a} vs {b}");
    }
}

#[test]
fn p2_cubature_matches_closed_form() {
    let configs: [(Complex64, [[f64; 2]; 2]); 5] = [
        (Complex64::from(2.0), [[1.0, 0.0], [0.0, 1.0]]),
        (Complex64::from(3.0), [[1.0, 0.0], [0.0, 2.0]]),
        (Complex64::from(2.5), [[1.0, 0.3], [0.3, 2.0]]),
        (Complex64::new(1.7, 0.8), [[2.0, 0.5], [0.5, 1.0]]),
        (Complex64::from(4.0), [[0.5, -0.2], [-0.2, 0.7]]),
    ];
    for (s, t) in configs {
        let c = p2_integral_check(s, t).unwrap();
        assert!(c.rel_error <= 1e-4, "s={s} T={t:?}: {c:?}");
    }
    let c = p2_integral_check(Complex64::from(2.0), [[1.0, 0.0], [0.0, 1.0]]).unwrap();
    assert!((c.closed_form.re - PI / 2.0).abs() < 1e-12);
}

/// Automorphisms by listing every integer matrix with entries in [−1, 1].
fn brute_group_order(l: &GramLattice) -> (u64, u64) {
    let n = l.rank();
    let s = l.gram();
    let mut counts = (0, 0);
    let total = 3usize.pow((n * n) as u32);
    for code in 0..total {
        let mut c = code;
        let mut g = vec![vec![0i64; n]; n];
        for row in g.iter_mut() {
            for x in row.iter_mut() {
                *x = (c % 3) as i64 - 1;
                c /= 3;
            }
        }
        let gm = orthokleis::intmat::IntMatrix::from_rows(&g);
        if gm.transpose().mul(s).mul(&gm) == *s {
            counts.0 += 1;
            if gm.det() > 0.into() {
                counts.1 += 1;
            }
        }
    }
    counts
}

#[test]
fn group_orders_match_brute_force() {
    for (name, want) in [("A1", (2, 1)), ("A2", (12, 6))] {
        let l = catalog(name).unwrap();
        assert_eq!(orthogonal_group_order(&l, 10_000), Some(want), "{name}");
        assert_eq!(brute_group_order(&l), want, "{name}");
    }
    assert_eq!(orthogonal_group_order(&catalog("D4").unwrap(), 10_000), Some((1152, 576)));
}

#[test]
fn modified_siegel_factors_are_not_reflection_symmetric() {
    let (before, after) = modified_siegel_reflection();
    assert_ne!(before, after);
}

proptest! {
    #[test]
    fn dirichlet_sum_is_linear(
        a in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..30),
        b in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..30),
        lambda in (-3.0f64..3.0, -3.0f64..3.0),
        s in (2.0f64..6.0, -10.0f64..10.0),
    ) {
        let c = |v: &[(f64, f64)]| v.iter().map(|&(re, im)| Complex64::new(re, im)).collect::<Vec<_>>();
        let (a, b) = (c(&a), c(&b));
        let l = Complex64::new(lambda.0, lambda.1);
        let s = Complex64::new(s.0, s.1);
        let len = a.len().max(b.len());
        let combo: Vec<Complex64> = (0..len).map(|i| a.get(i).copied().unwrap_or_default() + l * b.get(i).copied().unwrap_or_default()).collect();
        let lhs = dirichlet_sum(&combo, s);
        let rhs = dirichlet_sum(&a, s) + l * dirichlet_sum(&b, s);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm() + l.norm() * 100.0));
    }
}
