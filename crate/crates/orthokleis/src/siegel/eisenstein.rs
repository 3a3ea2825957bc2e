//! The Siegel Eisenstein series Σ_{P₂,₀\Sp₂(ℤ)} (det Im γZ)^s of degree two.
//!
//! Cosets correspond to coprime symmetric pairs (C, D) up to left GL₂(ℤ);
//! a class is stored as the row Hermite form of the 2×4 matrix [C D].

use super::SiegelPoint;
use crate::error::{Error, Result};
use crate::intmat::{hermite, minor_gcd, IntMatrix};
use num_complex::Complex64;
use num_traits::One;
use std::collections::HashSet;

/// Row Hermite form of [C D]; None unless the pair is symmetric, coprime and of rank two.
pub fn canonical_pair(cd: &IntMatrix) -> Option<IntMatrix> {
    let (c, d) = split(cd);
    if c.mul(&d.transpose()) != d.mul(&c.transpose()) {
        return None;
    }
    if !minor_gcd(cd, 2).is_one() {
        return None;
    }
    let hf = hermite(cd);
    (hf.pivots.len() == 2).then_some(hf.h)
}

fn split(cd: &IntMatrix) -> (IntMatrix, IntMatrix) {
    (cd.submatrix(0..2, 0..2), cd.submatrix(0..2, 2..4))
}

/// Classes with a representative whose entries are bounded by `b` in absolute value.
pub fn siegel_coset_reps(b: i64) -> Vec<IntMatrix> {
    let range: Vec<i64> = (-b..=b).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &c11 in &range {
        for &c12 in &range {
            for &c21 in &range {
                for &c22 in &range {
                    for &d11 in &range {
                        for &d12 in &range {
                            for &d21 in &range {
                                for &d22 in &range {
                                    // C Dᵗ symmetric, checked on the off-diagonal entry
                                    if c11 * d21 + c12 * d22 != d11 * c21 + d12 * c22 {
                                        continue;
                                    }
                                    let cd = IntMatrix::from_rows(&[vec![c11, c12, d11, d12], vec![c21, c22, d21, d22]]);
                                    if let Some(h) = canonical_pair(&cd) {
                                        if seen.insert(h.clone()) {
                                            out.push(h);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|h| (h.max_abs(), h.as_slice().to_vec()));
    out
}

/// det(CZ + D) for a class matrix [C D].
pub fn pair_automorphy(cd: &IntMatrix, z: &SiegelPoint) -> Complex64 {
    let zm = z.matrix();
    let e = |i: usize, j: usize| -> Complex64 {
        let mut acc = Complex64::from(cd[(i, j + 2)] as f64);
        for k in 0..2 {
            acc += cd[(i, k)] as f64 * zm[(k, j)];
        }
        acc
    };
    e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)
}

#[derive(Clone, Debug)]
pub struct SiegelEisensteinValue {
    pub value: Complex64,
    pub classes: usize,
    pub b: i64,
}

fn check_s(s: Complex64) -> Result<()> {
    if s.re <= 1.5 {
        return Err(Error::ConvergenceGuard { re: s.re, bound: 1.5 });
    }
    Ok(())
}

/// (det Y)^s Σ |det(CZ + D)|^{−2s} over the given classes.
pub fn siegel_eisenstein_with(z: &SiegelPoint, s: Complex64, reps: &[IntMatrix]) -> Result<Complex64> {
    check_s(s)?;
    let mut acc = Complex64::from(0.0);
    for cd in reps {
        let j = pair_automorphy(cd, z).norm();
        if j == 0.0 {
            return Err(Error::SingularDenominator);
        }
        acc += (-2.0 * s * j.ln()).exp();
    }
    Ok((s * z.det_y().ln()).exp() * acc)
}

pub fn siegel_eisenstein_truncated(z: &SiegelPoint, s: Complex64, b: i64) -> Result<SiegelEisensteinValue> {
    check_s(s)?;
    let reps = siegel_coset_reps(b);
    let value = siegel_eisenstein_with(z, s, &reps)?;
    Ok(SiegelEisensteinValue { value, classes: reps.len(), b })
}

/// The class of (C, D + CT) for an integral symmetric T: translation by Z ↦ Z + T.
pub fn translate_pair(cd: &IntMatrix, t: [[i64; 2]; 2]) -> IntMatrix {
    let (c, d) = split(cd);
    let tm = IntMatrix::from_rows(&[t[0].to_vec(), t[1].to_vec()]);
    let shifted = d.add(&c.mul(&tm));
    let rows: Vec<Vec<i64>> = (0..2).map(|i| vec![c[(i, 0)], c[(i, 1)], shifted[(i, 0)], shifted[(i, 1)]]).collect();
    canonical_pair(&IntMatrix::from_rows(&rows)).expect("translation preserves coprime symmetric pairs")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_class_is_present() {
        let reps = siegel_coset_reps(1);
        let id = IntMatrix::from_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert!(reps.contains(&id));
        assert!(canonical_pair(&IntMatrix::from_rows(&[vec![0, 0, 0, 1], vec![0, 0, -1, 0]])) == Some(id));
    }

    #[test]
    fn rejects_non_pairs() {
        // C Dᵗ not symmetric
        assert!(canonical_pair(&IntMatrix::from_rows(&[vec![1, 0, 0, 1], vec![0, 1, 0, 0]])).is_none());
        // not coprime
        assert!(canonical_pair(&IntMatrix::from_rows(&[vec![2, 0, 0, 0], vec![0, 0, 0, 1]])).is_none());
    }

    #[test]
    fn guard() {
        let z = SiegelPoint::scalar(1.0);
        assert!(matches!(siegel_eisenstein_truncated(&z, Complex64::from(1.2), 1), Err(Error::ConvergenceGuard { .. })));
    }
}
