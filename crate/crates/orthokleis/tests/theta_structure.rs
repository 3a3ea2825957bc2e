//! Raising operators applied to (det Y)^{(n+2)/2} θ_ℓ: one polynomial p in
//! (det(BY), tr(BY)) serves every isotropic ℓ, with determinant exponent
//! (n+2)/2 − r. The exponent −r does not admit any such p.

use orthokleis::siegel::exppoly::{q, qi};
use orthokleis::siegel::structure::{theta_structure_fit, unfolding_check};
use orthokleis::verify::isotropic_brackets;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn single_polynomial_with_shifted_exponent_d4() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bs = isotropic_brackets("D4", 6, &mut rng).unwrap();
    assert!(bs.len() >= 5);
    let fit = theta_structure_fit(&bs, 4, 1, q(6, 2) - qi(1), 1, 2);
    assert!(fit.holds(), "{fit:?}");
    assert!(fit.verified >= 4);
    let u = unfolding_check(&fit).unwrap();
    assert!(u.adjoint_step);
    assert!(u.plain_matches_composed);
}

#[test]
fn unshifted_exponent_admits_no_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bs = isotropic_brackets("D4", 6, &mut rng).unwrap();
    let fit = theta_structure_fit(&bs, 4, 1, -qi(1), 4, 6);
    assert!(!fit.holds(), "{fit:?}");
}
