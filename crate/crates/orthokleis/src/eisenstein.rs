//! Klingen Eisenstein series in Epstein form: a sum of det(R_Z[ℓ])^{−s/2}
//! over right-GL₂(ℤ) classes of primitive isotropic rank-2 matrices ℓ.
//!
//! Enumeration works with reduced bases. Every rank-2 lattice P has a basis
//! (l, m) with l shortest in P, |R(l, m)| ≤ R[l]/2 and R[m] ≥ R[l], so that
//! det = R[l]·R⊥[m] ≥ ¾R[l]². We enumerate isotropic l with
//! R[l] ≤ √(4B/3), and for each of them the vectors m in the S₁-orthogonal
//! complement of l whose component orthogonal to l (in the R metric) is
//! short enough. This is exhaustive for det ≤ B.

use crate::error::{Error, Result};
use crate::intmat::{complete_to_basis, gcd_slice, hermite, kernel_of_row, IntMatrix};
use crate::lattice::enumerate::{Ellipsoid, Incremental, Visitor};
use crate::majorant::{majorant_at, Majorant};
use crate::orthogonal::{OrthSpace, TubePoint};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashSet;

/// Boundary slack for the determinant cut.
pub const DET_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct IsotropicClass {
    /// Canonical representative, (n+4)×2.
    pub ell: IntMatrix,
    /// det(R[ℓ]) at the query basepoint.
    pub det_r: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Cap on the number of inner candidates examined.
    pub budget: u64,
    /// Keep only primitive ℓ (the series itself); otherwise all rank-2 isotropic ℓ.
    pub primitive_only: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: 400_000_000, primitive_only: true }
    }
}

#[derive(Clone, Debug)]
pub struct ClassEnumeration {
    /// Sorted by increasing det_r.
    pub classes: Vec<IsotropicClass>,
    pub candidates: u64,
}

impl ClassEnumeration {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Σ det^{−s/2}, summed from the largest determinant down.
    pub fn epstein(&self, s: Complex64) -> Complex64 {
        self.classes.iter().rev().map(|c| (-0.5 * s * c.det_r.ln()).exp()).sum()
    }
}

/// Column Hermite form under ℓ ↦ ℓG, G ∈ GL₂(ℤ).
///
/// The transpose is brought into row Hermite form: pivots positive, entries
/// above each pivot in [0, pivot). Valid for any rank-2 integer matrix.
pub fn canonical_class(ell: &IntMatrix) -> Result<IntMatrix> {
    let hf = hermite(&ell.transpose());
    if hf.pivots.len() != 2 {
        return Err(Error::RankDeficient);
    }
    Ok(hf.h.submatrix(0..2, 0..ell.rows()).transpose())
}

/// Right-GL₂(ℤ) classes of integer 2×2 matrices with |det| = m,
/// counted by listing Hermite forms [[a, b], [0, d]] with ad = m, 0 ≤ b < d.
pub fn hnf_det_class_count(m: u64) -> u64 {
    let mut count = 0;
    for a in 1..=m {
        if m % a == 0 {
            count += m / a;
        }
    }
    count
}

/// Sum of divisors.
pub fn sigma1(m: u64) -> u64 {
    (1..=m).filter(|d| m % d == 0).sum()
}

/// Splits ℓ = N·M with N primitive and canonical, M integral with det ≠ 0.
pub fn imprimitive_factorization_check(ell: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if ell.cols() != 2 {
        return Err(Error::Invalid("expected two columns".into()));
    }
    let hf = hermite(ell);
    if hf.pivots != [0, 1] {
        return Err(Error::RankDeficient);
    }
    // ℓ = u⁻¹h, and h vanishes below its first two rows
    let rows = ell.rows();
    let sat = hf.uinv.submatrix(0..rows, 0..2);
    let top = hf.h.submatrix(0..2, 0..2);
    // N' = N·uᵗ with uᵗ from the Hermite form of Nᵗ, hence M' = (u⁻¹)ᵗ·M
    let hn = hermite(&sat.transpose());
    let canon = hn.h.submatrix(0..2, 0..rows).transpose();
    let m = hn.uinv.transpose().mul(&top);
    debug_assert_eq!(canon.mul(&m), *ell);
    Ok((canon, m))
}

struct Inner<'a> {
    e: &'a Ellipsoid,
    isotropy: Incremental<i64>,
    hits: Vec<(Vec<i64>, f64)>,
    seen: u64,
    budget: u64,
    over: bool,
}

impl Visitor for Inner<'_> {
    fn fix(&mut self, level: usize, x: &[i64]) {
        self.isotropy.fix(level, x);
    }

    fn leaf(&mut self, x: &[i64], norm: f64) -> bool {
        self.seen += 1;
        if self.seen > self.budget {
            self.over = true;
            return false;
        }
        if self.isotropy.value() == 0 {
            self.hits.push((self.e.lift(x), norm));
        }
        true
    }
}

/// Enumerates classes [ℓ] with S₁[ℓ] = 0, rank 2 and det(R[ℓ]) ≤ B.
pub fn enumerate_isotropic_classes(space: &OrthSpace, r: &Majorant, b: f64, opts: EnumOptions) -> Result<ClassEnumeration> {
    if b <= 0.0 || b.is_nan() {
        return Err(Error::Invalid(format!("truncation bound must be positive, got {b}")));
    }
    let size = space.size();
    let s1 = &space.forms.s1;
    let cut = b * (1.0 + DET_SLACK);
    let l_bound = (4.0 * cut / 3.0).sqrt() * (1.0 + DET_SLACK);
    let outer = Ellipsoid::new(&r.r);

    struct Outer<'a> {
        e: &'a Ellipsoid,
        s1: &'a IntMatrix,
        out: Vec<Vec<i64>>,
    }
    impl Visitor for Outer<'_> {
        fn leaf(&mut self, x: &[i64], _norm: f64) -> bool {
            let l = self.e.lift(x);
            if self.s1.bilinear(&l, &l) == 0 {
                self.out.push(l);
            }
            true
        }
    }
    let mut ov = Outer { e: &outer, s1, out: Vec::new() };
    outer.run(l_bound, true, false, &mut ov);

    // prepare every inner problem first so the total work can be estimated
    struct Fibre {
        l: Vec<i64>,
        l0: Vec<i64>,
        g: i64,
        rl: f64,
        basis: IntMatrix,
        cross: Vec<f64>,
        perp: DMatrix<f64>,
    }
    let mut fibres = Vec::new();
    let mut estimate = 0.0;
    for l in ov.out {
        let g = gcd_slice(&l);
        if opts.primitive_only && g != 1 {
            continue;
        }
        let l0: Vec<i64> = l.iter().map(|v| v / g).collect();
        let rl = r.value(&l);
        let basis = complement_basis(s1, &l0);
        let bf = basis.to_f64();
        let lf = DMatrix::from_fn(size, 1, |i, _| l[i] as f64);
        let rb = &r.r * &bf;
        let gram = bf.transpose() * &rb;
        let cross: Vec<f64> = (rb.transpose() * &lf).iter().copied().collect();
        let k = cross.len();
        let perp = DMatrix::from_fn(k, k, |i, j| gram[(i, j)] - cross[i] * cross[j] / rl);
        let perp = (&perp + perp.transpose()) * 0.5;
        estimate += ellipsoid_count(k, cut / rl, perp.determinant());
        fibres.push(Fibre { l, l0, g, rl, basis, cross, perp });
    }
    if estimate > 2.0 * opts.budget as f64 {
        return Err(Error::BudgetExceeded { needed: estimate as u64, budget: opts.budget });
    }

    let mut seen = HashSet::new();
    let mut classes = Vec::new();
    let mut candidates = 0u64;
    for Fibre { l, l0, g, rl, basis, cross, perp } in fibres {
        let k = cross.len();
        let inner = Ellipsoid::new(&perp);
        let t = s1.bracket(&basis);
        let tred = t.bracket(&inner.basis);
        let mut iv = Inner {
            e: &inner,
            isotropy: Incremental::new(k, tred.as_slice().to_vec()),
            hits: Vec::new(),
            seen: 0,
            budget: opts.budget.saturating_sub(candidates),
            over: false,
        };
        inner.run(cut / rl, true, false, &mut iv);
        candidates += iv.seen.min(iv.budget);
        if iv.over {
            return Err(Error::BudgetExceeded { needed: opts.budget + 1, budget: opts.budget });
        }
        for (c, pnorm) in iv.hits {
            if opts.primitive_only && gcd_slice(&c) != 1 {
                continue;
            }
            let rho: f64 = cross.iter().zip(&c).map(|(a, &b)| a * b as f64).sum();
            // R(l, k·l₀ + Bc) = k·R[l]/g + ρ; keep every k with |·| ≤ R[l]/2
            let centre = -rho * g as f64 / rl;
            let half = g as f64 / 2.0;
            let (klo, khi) = if g == 1 {
                let k0 = centre.round() as i64;
                (k0, k0)
            } else {
                ((centre - half - 1e-9).ceil() as i64, (centre + half + 1e-9).floor() as i64)
            };
            let bc = basis.mul_vec(&c);
            for kk in klo..=khi {
                let pair = kk as f64 * rl / g as f64 + rho;
                if pnorm + pair * pair / rl < rl * (1.0 - 1e-9) {
                    continue; // l is not shortest here; found from another l
                }
                let m: Vec<i64> = l0.iter().zip(&bc).map(|(a, b)| kk * a + b).collect();
                let det_r = r.det_pair(&l, &m);
                if det_r > cut {
                    continue;
                }
                let ell = IntMatrix::from_columns(&[l.clone(), m]);
                let canon = canonical_class(&ell)?;
                if seen.insert(canon.as_slice().to_vec()) {
                    classes.push(IsotropicClass { ell: canon, det_r });
                }
            }
        }
    }
    classes.sort_by(|a, b| a.det_r.total_cmp(&b.det_r).then_with(|| a.ell.as_slice().cmp(b.ell.as_slice())));
    Ok(ClassEnumeration { classes, candidates })
}

/// Expected number of half-space lattice points with G[x] ≤ t, by volume.
fn ellipsoid_count(k: usize, t: f64, det: f64) -> f64 {
    let kf = k as f64;
    let log_ball = 0.5 * kf * std::f64::consts::PI.ln() - crate::special::ln_gamma_real(0.5 * kf + 1.0);
    0.5 * (log_ball + 0.5 * kf * t.ln() - 0.5 * det.ln()).exp()
}

/// Columns b₁, …, b_{N−2} such that (l₀, b₁, …) is a ℤ-basis of the
/// S₁-orthogonal complement of the isotropic primitive vector l₀.
fn complement_basis(s1: &IntMatrix, l0: &[i64]) -> IntMatrix {
    let size = l0.len();
    let v = complete_to_basis(l0);
    let a = s1.mul_vec(l0);
    // in coordinates y = V⁻¹x the constraint is (Vᵗa)ᵗy = 0 and (Vᵗa)₀ = S₁[l₀] = 0
    let va = v.transpose().mul_vec(&a);
    debug_assert_eq!(va[0], 0);
    let ker = kernel_of_row(&va[1..]);
    let tail = v.submatrix(0..size, 1..size);
    tail.mul(&ker)
}

#[derive(Clone, Copy, Debug)]
pub struct EisensteinOptions {
    pub enumeration: EnumOptions,
    /// Evaluate below the convergence abscissa; the value is then only a formal truncation.
    pub allow_formal: bool,
}

impl Default for EisensteinOptions {
    fn default() -> Self {
        EisensteinOptions { enumeration: EnumOptions::default(), allow_formal: false }
    }
}

#[derive(Clone, Debug)]
pub struct EisensteinValue {
    pub value: Complex64,
    pub classes: usize,
    pub b: f64,
    pub s: Complex64,
    pub exhaustive: bool,
    pub formal: bool,
}

impl EisensteinValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "classes": self.classes,
            "B": self.b,
            "s": [self.s.re, self.s.im],
            "value": [self.value.re, self.value.im],
            "exhaustive": self.exhaustive,
            "formal": self.formal,
        })
    }
}

/// Σ det(R_Z[ℓ])^{−s/2} over primitive isotropic classes with det ≤ B.
pub fn eisenstein_truncated(space: &OrthSpace, z: &TubePoint, s: Complex64, b: f64, opts: EisensteinOptions) -> Result<EisensteinValue> {
    let bound = space.n() as f64 + 1.0;
    let formal = s.re <= bound;
    if formal && !opts.allow_formal {
        return Err(Error::ConvergenceGuard { re: s.re, bound });
    }
    let r = majorant_at(space, z)?;
    let en = enumerate_isotropic_classes(space, &r, b, EnumOptions { primitive_only: true, ..opts.enumeration })?;
    Ok(EisensteinValue { value: en.epstein(s), classes: en.len(), b, s, exhaustive: true, formal })
}

/// Comparison of all rank-2 isotropic classes against primitive classes
/// convolved with Hermite-form counts.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub all_classes: usize,
    pub convolved: usize,
    /// Largest relative gap between matched sorted determinants.
    pub max_gap: f64,
    pub recomposition_ok: bool,
}

impl Decomposition {
    pub fn passes(&self, tol: f64) -> bool {
        self.all_classes == self.convolved && self.max_gap <= tol && self.recomposition_ok
    }
}

/// Every rank-2 isotropic ℓ is N·M with N primitive; det R[ℓ] = det R[N]·det(M)²
/// and there are σ₁(m) classes of M with |det M| = m.
pub fn imprimitive_decomposition(space: &OrthSpace, r: &Majorant, b: f64, budget: u64) -> Result<Decomposition> {
    let all = enumerate_isotropic_classes(space, r, b, EnumOptions { budget, primitive_only: false })?;
    let prim = enumerate_isotropic_classes(space, r, b, EnumOptions { budget, primitive_only: true })?;
    let mut conv = Vec::new();
    for c in &prim.classes {
        let mut m = 1u64;
        while c.det_r * (m * m) as f64 <= b * (1.0 + DET_SLACK) {
            for _ in 0..sigma1(m) {
                conv.push(c.det_r * (m * m) as f64);
            }
            m += 1;
        }
    }
    conv.sort_by(f64::total_cmp);
    let mut recomposition_ok = true;
    let prim_keys: HashSet<Vec<i64>> = prim.classes.iter().map(|c| c.ell.as_slice().to_vec()).collect();
    for c in &all.classes {
        let (n, m) = imprimitive_factorization_check(&c.ell)?;
        let ok = n.mul(&m) == c.ell && m.det() != 0.into() && prim_keys.contains(n.as_slice());
        recomposition_ok &= ok;
    }
    let dets: Vec<f64> = all.classes.iter().map(|c| c.det_r).collect();
    let max_gap = if dets.len() == conv.len() {
        dets.iter().zip(&conv).map(|(a, b)| (a - b).abs() / a.abs().max(1.0)).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(Decomposition { all_classes: dets.len(), convolved: conv.len(), max_gap, recomposition_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use crate::majorant::base_majorant;

    fn cols(a: &[i64], b: &[i64]) -> IntMatrix {
        IntMatrix::from_columns(&[a.to_vec(), b.to_vec()])
    }

    #[test]
    fn canonical_examples() {
        let e1 = [1, 0, 0, 0, 0];
        let e2 = [0, 1, 0, 0, 0];
        let e12 = [1, 1, 0, 0, 0];
        assert_eq!(canonical_class(&cols(&e1, &e2)).unwrap(), cols(&e1, &e2));
        assert_eq!(canonical_class(&cols(&e2, &e1)).unwrap(), cols(&e1, &e2));
        assert_eq!(canonical_class(&cols(&e12, &e2)).unwrap(), cols(&e1, &e2));
        assert!(matches!(canonical_class(&cols(&e1, &[2, 0, 0, 0, 0])), Err(Error::RankDeficient)));
    }

    #[test]
    fn hnf_counts() {
        assert_eq!(hnf_det_class_count(1), 1);
        assert_eq!(hnf_det_class_count(4), 7);
        assert_eq!(hnf_det_class_count(6), 12);
    }

    #[test]
    fn hnf_counts_match_brute_force() {
        for m in 1..=8i64 {
            let mut set = HashSet::new();
            for a in -m..=m {
                for b in -m..=m {
                    for c in -m..=m {
                        for d in -m..=m {
                            if (a * d - b * c).abs() == m {
                                let x = IntMatrix::from_rows(&[vec![a, b], vec![c, d]]);
                                set.insert(canonical_class(&x).unwrap());
                            }
                        }
                    }
                }
            }
            assert_eq!(set.len() as u64, hnf_det_class_count(m as u64), "m = {m}");
        }
    }

    #[test]
    fn factorization_examples() {
        let l = cols(&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]);
        let (n, m) = imprimitive_factorization_check(&l).unwrap();
        assert_eq!(n, l);
        assert_eq!(m, IntMatrix::identity(2));
        let (n, m) = imprimitive_factorization_check(&l.scale(3)).unwrap();
        assert_eq!(n, l);
        assert_eq!(m, IntMatrix::identity(2).scale(3));
    }

    #[test]
    fn class_counts_at_base_point() {
        let sp = OrthSpace::new(catalog("A2").unwrap());
        let r = base_majorant(&sp);
        let en = enumerate_isotropic_classes(&sp, &r, 20.0, EnumOptions::default()).unwrap();
        assert_eq!(en.len(), 200);
        let mut hist = std::collections::BTreeMap::new();
        for c in &en.classes {
            *hist.entry(c.det_r.round() as i64).or_insert(0) += 1;
        }
        assert_eq!(hist.into_iter().collect::<Vec<_>>(), vec![(1, 4), (4, 28), (9, 48), (16, 120)]);
        let e12 = canonical_class(&cols(&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0])).unwrap();
        assert!(en.classes.iter().any(|c| c.ell == e12 && (c.det_r - 1.0).abs() < 1e-12));
        for c in &en.classes {
            assert!(sp.forms.s1.bracket(&c.ell).is_zero());
            assert_eq!(c.ell.smith_invariants(), vec![1, 1]);
        }
    }

    #[test]
    fn small_bound_keeps_only_minimal_classes() {
        let sp = OrthSpace::new(catalog("A1").unwrap());
        let r = base_majorant(&sp);
        let en = enumerate_isotropic_classes(&sp, &r, 0.5, EnumOptions::default()).unwrap();
        assert!(en.is_empty());
        let en = enumerate_isotropic_classes(&sp, &r, 1.0, EnumOptions::default()).unwrap();
        assert!(en.classes.iter().all(|c| (c.det_r - 1.0).abs() < 1e-12));
        assert!(!en.classes.is_empty());
    }

    #[test]
    fn decomposition_at_base_point() {
        let sp = OrthSpace::new(catalog("A2").unwrap());
        let r = base_majorant(&sp);
        let d = imprimitive_decomposition(&sp, &r, 20.0, u64::MAX).unwrap();
        assert!(d.passes(1e-9), "{d:?}");
    }

    #[test]
    fn guard_below_abscissa() {
        let sp = OrthSpace::new(catalog("A2").unwrap());
        let z = sp.base_point();
        let e = eisenstein_truncated(&sp, &z, Complex64::new(3.0, 0.0), 2.0, EisensteinOptions::default());
        assert!(matches!(e, Err(Error::ConvergenceGuard { .. })));
        let v = eisenstein_truncated(&sp, &z, Complex64::new(3.5, 0.0), 0.999, EisensteinOptions::default()).unwrap();
        assert_eq!(v.classes, 0);
    }
}
