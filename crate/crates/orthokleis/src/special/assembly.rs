//! Gamma factors, the completed E₈ series and their reflection algebra.

use super::{gamma, gamma2, phi2, xi};
use crate::eisenstein::{eisenstein_truncated, EisensteinOptions, EisensteinValue};
use crate::error::{Error, Result};
use crate::lattice::{short_vectors, GramLattice};
use crate::orthogonal::{OrthSpace, TubePoint};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::f64::consts::PI;

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// φ₂(t) = t(t − ½) exactly.
pub fn phi2_exact(t: &Q) -> Q {
    t * (t - q(1, 2))
}

fn check_rank(n: u32) -> Result<u32> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::Invalid(format!("rank {n} is not a positive multiple of 4")));
    }
    Ok(n / 4)
}

/// γ_S(s) = (−4)^r φ₂(s/2 − 2r) φ₂(s/2) Π_{j=1}^r φ₂(s/2 − 2j + 3/2), r = n/4.
pub fn gamma_s(s: Complex64, n: u32) -> Result<Complex64> {
    let r = check_rank(n)?;
    let h = s / 2.0;
    let mut v = (-4.0f64).powi(r as i32) * phi2(h - 2.0 * r as f64) * phi2(h);
    for j in 1..=r {
        v *= phi2(h - 2.0 * j as f64 + 1.5);
    }
    Ok(v)
}

/// The factor obtained by composing the one-step δ_α identity along δ₁^{(r)}:
/// φ₂(s/2 − 2r) φ₂(s/2) (−¼)^r Π_{j=1}^r φ₂(s/2 − j + ½).
pub fn gamma_s_composed(s: Complex64, n: u32) -> Result<Complex64> {
    let r = check_rank(n)?;
    let h = s / 2.0;
    let mut v = (-0.25f64).powi(r as i32) * phi2(h - 2.0 * r as f64) * phi2(h);
    for j in 1..=r {
        v *= phi2(h - j as f64 + 0.5);
    }
    Ok(v)
}

/// γ_S at rational s, exactly.
pub fn gamma_s_exact(s: &Q, n: u32) -> Result<Q> {
    let r = check_rank(n)? as i64;
    let h = s * q(1, 2);
    let mut v = phi2_exact(&(&h - q(2 * r, 1))) * phi2_exact(&h);
    for _ in 0..r {
        v *= q(-4, 1);
    }
    for j in 1..=r {
        v *= phi2_exact(&(&h - q(2 * j, 1) + q(3, 2)));
    }
    Ok(v)
}

/// The roots of γ_S in s with multiplicity, two per φ₂ factor, in factor order.
pub fn gamma_s_roots(n: u32) -> Result<Vec<Q>> {
    let r = check_rank(n)? as i64;
    // φ₂(s/2 − c) vanishes at s = 2c and s = 2c + 1
    let mut shifts = vec![q(2 * r, 1), Q::zero()];
    for j in 1..=r {
        shifts.push(q(2 * j, 1) - q(3, 2));
    }
    Ok(shifts.into_iter().flat_map(|c| [&c * q(2, 1), &c * q(2, 1) + Q::one()]).collect())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GammaFactors {
    pub gamma2: Complex64,
    pub phi2: Complex64,
    pub gamma_s: Complex64,
}

pub fn gamma_factors(s: Complex64, n: u32) -> Result<GammaFactors> {
    Ok(GammaFactors { gamma2: gamma2(s), phi2: phi2(s), gamma_s: gamma_s(s, n)? })
}

/// One named factor of a completed series.
#[derive(Clone, Debug, Serialize)]
pub struct Factor {
    pub label: String,
    pub value: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletedSeriesFactors {
    pub s: Complex64,
    pub n: u32,
    pub k: i64,
    pub r: u32,
    pub factors: Vec<Factor>,
}

impl CompletedSeriesFactors {
    pub fn product(&self) -> Complex64 {
        self.factors.iter().map(|f| f.value).product()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.label.as_str()).collect()
    }
}

// ξ(a·s + b) with poles reported at the s-value
fn xi_at(label: &str, a: f64, b: f64, s: Complex64) -> Result<Factor> {
    let u = a * s + b;
    match xi(u) {
        Ok(value) => Ok(Factor { label: label.to_string(), value }),
        Err(Error::PoleAt { at, residue }) => Err(Error::PoleAt { at: (at - b) / a, residue: residue.map(|r| r / a) }),
        Err(e) => Err(e),
    }
}

/// ξ(s−3) ξ(2s−8) ξ(s) ξ(s−1) γ_S(s) for the E₈ lattice (n = 8).
pub fn completed_e8_factors(s: Complex64) -> Result<CompletedSeriesFactors> {
    let factors = vec![
        xi_at("xi(s)", 1.0, 0.0, s)?,
        xi_at("xi(s-1)", 1.0, -1.0, s)?,
        Factor { label: "gamma_S(s)".into(), value: gamma_s(s, 8)? },
        xi_at("xi(s-3)", 1.0, -3.0, s)?,
        xi_at("xi(2s-8)", 2.0, -8.0, s)?,
    ];
    Ok(CompletedSeriesFactors { s, n: 8, k: -4, r: 2, factors })
}

/// s ↦ 9 − s.
pub fn e8_reflection(s: Complex64) -> Complex64 {
    9.0 - s
}

#[derive(Clone, Debug)]
pub struct CompletedEisenstein {
    pub factors: CompletedSeriesFactors,
    pub series: EisensteinValue,
    pub value: Complex64,
}

pub fn completed_e8_eisenstein(space: &OrthSpace, w: &TubePoint, s: Complex64, b: f64, opts: EisensteinOptions) -> Result<CompletedEisenstein> {
    if space.n() != 8 {
        return Err(Error::Invalid("the completed series is defined for rank 8".into()));
    }
    let factors = completed_e8_factors(s)?;
    let series = eisenstein_truncated(space, w, s, b, opts)?;
    let value = factors.product() * series.value;
    Ok(CompletedEisenstein { factors, series, value })
}

/// Σ_{m ≥ 1} coeffs[m−1] m^{−s}.
pub fn dirichlet_sum(coeffs: &[Complex64], s: Complex64) -> Complex64 {
    coeffs.iter().enumerate().map(|(i, c)| c * (-s * ((i + 1) as f64).ln()).exp()).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletedDirichlet {
    pub d: Complex64,
    pub factors: Vec<Factor>,
    pub completed: Complex64,
    /// (4π)^{−(s+k−n−1)} Γ(s+k−n−1) / #SO(S; ℤ).
    pub prefactor: Complex64,
}

/// D*(s) = (4π)^{−s} Γ(s) ξ(s−k+6) ξ(2s−2k+10) ξ(s−k+9) ξ(s−k+8) γ_S(s−k+9) D(s).
pub fn completed_dirichlet(coeffs: &[Complex64], s: Complex64, k: i64, n: u32, so_order: u64) -> Result<CompletedDirichlet> {
    if s.re <= k as f64 + 1.0 {
        return Err(Error::ConvergenceGuard { re: s.re, bound: k as f64 + 1.0 });
    }
    if so_order == 0 {
        return Err(Error::Invalid("so_order must be positive".into()));
    }
    let kf = k as f64;
    let u = s - kf + 9.0;
    let factors = vec![
        Factor { label: "(4pi)^(-s)".into(), value: (-s * (4.0 * PI).ln()).exp() },
        Factor { label: "Gamma(s)".into(), value: gamma(s) },
        xi_at("xi(s-k+6)", 1.0, 6.0 - kf, s)?,
        xi_at("xi(2s-2k+10)", 2.0, 10.0 - 2.0 * kf, s)?,
        xi_at("xi(s-k+9)", 1.0, 9.0 - kf, s)?,
        xi_at("xi(s-k+8)", 1.0, 8.0 - kf, s)?,
        Factor { label: "gamma_S(s-k+9)".into(), value: gamma_s(u, n)? },
    ];
    let d = dirichlet_sum(coeffs, s);
    let completed = factors.iter().map(|f| f.value).product::<Complex64>() * d;
    let e = s + kf - n as f64 - 1.0;
    let prefactor = (-e * (4.0 * PI).ln()).exp() * gamma(e) / so_order as f64;
    Ok(CompletedDirichlet { d, factors, completed, prefactor })
}

/// c + a·s + b·k with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub c: Q,
    pub s: Q,
    pub k: Q,
}

impl Affine {
    pub fn new(c: i64, s: i64, k: i64) -> Self {
        Affine { c: q(c, 1), s: q(s, 1), k: q(k, 1) }
    }

    pub fn plus(&self, o: &Affine) -> Affine {
        Affine { c: &self.c + &o.c, s: &self.s + &o.s, k: &self.k + &o.k }
    }

    /// Substitutes s ↦ image.
    pub fn substitute_s(&self, image: &Affine) -> Affine {
        Affine { c: &self.c + &self.s * &image.c, s: &self.s * &image.s, k: &self.k + &self.s * &image.k }
    }
}

/// (2k − 9 − s) − k + 9 = 9 − (s − k + 9): the substitution s ↦ 2k − 9 − s acts on the
/// variable u = s − k + 9 of the E* factors as u ↦ 9 − u.
pub fn dirichlet_reflection_identity() -> bool {
    let u = Affine::new(9, 1, -1);
    let reflection = Affine::new(-9, -1, 2);
    let lhs = u.substitute_s(&reflection);
    let rhs = Affine::new(9, 0, 0).plus(&Affine { c: -&u.c, s: -&u.s, k: -&u.k });
    lhs == rhs
}

/// ξ(a s + b) normalized by ξ(u) = ξ(1 − u) to a positive s-coefficient.
fn xi_argument(a: &Q, b: &Q) -> (Q, Q) {
    if *a < Q::zero() {
        (-a, Q::one() - b)
    } else {
        (a.clone(), b.clone())
    }
}

#[derive(Clone, Debug)]
pub struct ModifiedSiegelFactors {
    pub factors: Vec<Factor>,
    /// The series itself has a simple pole at s = 3/2; its factors do not.
    pub series_pole: bool,
}

/// ξ(2s) ξ(4s−2).
pub fn modified_siegel_factors(s: Complex64) -> Result<ModifiedSiegelFactors> {
    let factors = vec![xi_at("xi(2s)", 2.0, 0.0, s)?, xi_at("xi(4s-2)", 4.0, -2.0, s)?];
    Ok(ModifiedSiegelFactors { factors, series_pole: (s - 1.5).norm() < 1e-12 })
}

/// Arguments of ξ(2s) ξ(4s−2) before and after s ↦ 3/2 − s, normalized by ξ(u) = ξ(1−u).
pub fn modified_siegel_reflection() -> (Vec<(Q, Q)>, Vec<(Q, Q)>) {
    let args = [(q(2, 1), Q::zero()), (q(4, 1), q(-2, 1))];
    let mut before: Vec<(Q, Q)> = args.iter().map(|(a, b)| xi_argument(a, b)).collect();
    // a(3/2 − s) + b = −a s + (3a/2 + b)
    let mut after: Vec<(Q, Q)> = args.iter().map(|(a, b)| xi_argument(&-a, &(a * q(3, 2) + b))).collect();
    before.sort();
    after.sort();
    (before, after)
}

/// #O(S; ℤ) and #SO(S; ℤ) by backtracking over vectors of the diagonal norms.
/// Returns None when the count would exceed `cap`.
pub fn orthogonal_group_order(l: &GramLattice, cap: u64) -> Option<(u64, u64)> {
    let n = l.rank();
    let s = l.gram();
    let mut pools: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
    for i in 0..n {
        let norm = s[(i, i)];
        let sv = short_vectors(l, norm);
        let mut pool = Vec::new();
        for v in sv.vectors {
            if s.bilinear(&v, &v) == norm {
                pool.push(v.iter().map(|a| -a).collect());
                pool.push(v);
            }
        }
        pools.push(pool);
    }
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut counts = (0u64, 0u64);
    fn rec(l: &GramLattice, pools: &[Vec<Vec<i64>>], cols: &mut Vec<Vec<i64>>, counts: &mut (u64, u64), cap: u64) -> bool {
        let i = cols.len();
        let n = pools.len();
        if i == n {
            counts.0 += 1;
            let g = crate::intmat::IntMatrix::from_columns(cols);
            if g.det() > BigInt::zero() {
                counts.1 += 1;
            }
            return counts.0 <= cap;
        }
        for v in &pools[i] {
            if cols.iter().enumerate().all(|(j, c)| l.gram().bilinear(c, v) == l.gram()[(j, i)]) {
                cols.push(v.clone());
                let ok = rec(l, pools, cols, counts, cap);
                cols.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    rec(l, &pools, &mut cols, &mut counts, cap).then_some(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;

    #[test]
    fn phi2_values() {
        assert_eq!(phi2_exact(&q(1, 2)), Q::zero());
        assert_eq!(phi2_exact(&q(1, 1)), q(1, 2));
    }

    #[test]
    fn gamma_s_rank_eight_instance() {
        let s = Complex64::new(11.3, 0.4);
        let h = s / 2.0;
        let want = 16.0 * phi2(h - 4.0) * phi2(h) * phi2(h - 0.5) * phi2(h - 2.5);
        assert!((gamma_s(s, 8).unwrap() - want).norm() < 1e-10 * want.norm());
    }

    #[test]
    fn roots_rank_eight() {
        let roots: Vec<Q> = [0, 1, 8, 9, 1, 2, 5, 6].iter().map(|&v| q(v, 1)).collect();
        let mut got = gamma_s_roots(8).unwrap();
        let mut want = roots.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        for r in &roots {
            assert!(gamma_s_exact(r, 8).unwrap().is_zero());
            assert!(!gamma_s_exact(&(r + q(1, 2)), 8).unwrap().is_zero());
        }
    }

    #[test]
    fn reflection_algebra() {
        assert!(dirichlet_reflection_identity());
        let s = Complex64::new(3.2, 1.0);
        assert_eq!(e8_reflection(e8_reflection(s)), s);
    }

    #[test]
    fn pole_reporting() {
        assert!(matches!(completed_e8_factors(Complex64::from(3.0)), Err(Error::PoleAt { at, .. }) if (at - 3.0).abs() < 1e-12));
        let f = completed_e8_factors(Complex64::from(12.0)).unwrap();
        assert!(f.factors.iter().all(|x| x.value.norm() > 0.0 && x.value.norm().is_finite()));
        assert!(modified_siegel_factors(Complex64::from(1.5)).unwrap().series_pole);
        assert!(matches!(modified_siegel_factors(Complex64::from(0.75)), Err(Error::PoleAt { .. })));
    }

    #[test]
    fn group_orders() {
        assert_eq!(orthogonal_group_order(&catalog("A1").unwrap(), 1 << 20), Some((2, 1)));
        assert_eq!(orthogonal_group_order(&catalog("A2").unwrap(), 1 << 20), Some((12, 6)));
        assert_eq!(orthogonal_group_order(&catalog("D4").unwrap(), 1 << 20), Some((1152, 576)));
    }
}
