use orthokleis::eisenstein::{canonical_class, hnf_det_class_count, sigma1};
use orthokleis::intmat::IntMatrix;
use orthokleis::lattice::{catalog, parse_gram, short_vectors, CATALOG};
use orthokleis::Error;
use proptest::prelude::*;

fn to_text(m: &IntMatrix) -> String {
    let mut out = format!("{}\n", m.rows());
    for r in m.to_rows() {
        out += &r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        out.push('\n');
    }
    out
}

#[test]
fn catalog_roundtrips_through_text() {
    for name in CATALOG {
        let l = catalog(name).unwrap();
        let back = parse_gram(&to_text(l.gram())).unwrap();
        assert_eq!(back.gram(), l.gram(), "{name}");
        assert_eq!(back.det(), l.det());
        assert_eq!(back.level(), l.level());
    }
}

#[test]
fn malformed_gram_is_rejected() {
    assert!(matches!(parse_gram("2\n2 1\n1 3\n"), Err(Error::NotEven { .. })));
    assert!(matches!(parse_gram("2\n2 1\n0 2\n"), Err(Error::NotSymmetric(..))));
    assert!(matches!(parse_gram("2\n2 3\n3 2\n"), Err(Error::NotPositiveDefinite(_))));
    assert!(matches!(parse_gram("2\n2 1\n"), Err(Error::Parse(_))));
}

#[test]
fn root_counts() {
    for (name, roots) in [("A1", 2), ("A2", 6), ("A4", 20), ("D4", 24), ("E8", 240)] {
        assert_eq!(short_vectors(&catalog(name).unwrap(), 2).count(), roots, "{name}");
    }
}

fn gl2() -> impl Strategy<Value = IntMatrix> {
    // products of elementary moves and sign flips
    prop::collection::vec((0u8..3, -3i64..=3), 1..6).prop_map(|ops| {
        let mut g = IntMatrix::identity(2);
        for (kind, k) in ops {
            let e = match kind {
                0 => IntMatrix::from_rows(&[vec![1, k], vec![0, 1]]),
                1 => IntMatrix::from_rows(&[vec![1, 0], vec![k, 1]]),
                _ => IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
            };
            g = g.mul(&e);
        }
        g
    })
}

proptest! {
    #[test]
    fn canonical_class_is_idempotent_and_gl2_invariant(
        entries in prop::collection::vec(-6i64..=6, 12),
        g in gl2(),
    ) {
        let ell = IntMatrix::from_rows(&entries.chunks(2).map(|c| c.to_vec()).collect::<Vec<_>>());
        match canonical_class(&ell) {
            Ok(c) => {
                prop_assert_eq!(canonical_class(&c).unwrap(), c.clone());
                prop_assert_eq!(canonical_class(&ell.mul(&g)).unwrap(), c);
            }
            Err(e) => prop_assert!(matches!(e, Error::RankDeficient)),
        }
    }

    #[test]
    fn hermite_class_count_is_divisor_sum(m in 1u64..500) {
        prop_assert_eq!(hnf_det_class_count(m), sigma1(m));
    }
}
