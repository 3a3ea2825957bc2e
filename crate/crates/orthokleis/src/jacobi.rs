//! Heisenberg and Jacobi groups of a lattice (ℤⁿ, σ), their embedding into
//! the parabolic Γ_{S,J} and the slash actions on functions of (τ, z).
//!
//! Unit-circle components are stored as angles θ ∈ ℚ/ℤ with ζ = e(θ), so every
//! group law here is exact. Floats enter only through `Phase::from_f64`, which
//! takes the exact dyadic value of the float.

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::lattice::GramLattice;
use crate::orthogonal::{OrthElement, OrthSpace, TubePoint};
use crate::siegel::exppoly::{q_from_f64, qi, Q};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;
use std::f64::consts::PI;
use std::sync::Arc;

/// e(θ) with θ reduced to [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase(Q);

impl Phase {
    pub fn one() -> Self {
        Phase(Q::zero())
    }

    pub fn from_angle(theta: Q) -> Self {
        let f = theta.floor();
        Phase(theta - f)
    }

    pub fn from_f64(theta: f64) -> Self {
        Phase::from_angle(q_from_f64(theta))
    }

    pub fn angle(&self) -> &Q {
        &self.0
    }

    pub fn mul(&self, other: &Phase) -> Phase {
        Phase::from_angle(&self.0 + &other.0)
    }

    pub fn inv(&self) -> Phase {
        Phase::from_angle(-&self.0)
    }

    pub fn to_c64(&self) -> Complex64 {
        let t = self.0.to_f64().unwrap_or(0.0);
        Complex64::from_polar(1.0, 2.0 * PI * t)
    }
}

/// Rational bilinear form σ(x, y) = xᵗSy.
#[derive(Clone, Debug)]
pub struct Pairing {
    s: Vec<Vec<Q>>,
}

impl Pairing {
    pub fn new(s: &IntMatrix) -> Self {
        let n = s.rows();
        Pairing { s: (0..n).map(|i| (0..n).map(|j| qi(s[(i, j)])).collect()).collect() }
    }

    pub fn of(l: &GramLattice) -> Self {
        Pairing::new(l.gram())
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn sigma(&self, x: &[Q], y: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += xi * &self.s[i][j] * yj;
            }
        }
        acc
    }

    fn to_f64(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| self.s[i][j].to_f64().unwrap_or(f64::NAN))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub x: Vec<Q>,
    pub y: Vec<Q>,
    pub zeta: Phase,
}

fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(u, v)| u + v).collect()
}

fn neg_vec(a: &[Q]) -> Vec<Q> {
    a.iter().map(|u| -u).collect()
}

fn lin(a: &Q, u: &[Q], b: &Q, v: &[Q]) -> Vec<Q> {
    u.iter().zip(v).map(|(x, y)| a * x + b * y).collect()
}

pub fn int_vec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| qi(x)).collect()
}

fn integral(v: &[Q]) -> Option<Vec<i64>> {
    v.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()
}

impl HeisenbergElement {
    pub fn new(x: Vec<Q>, y: Vec<Q>, zeta: Phase) -> Self {
        assert_eq!(x.len(), y.len(), "x and y must have the same length");
        HeisenbergElement { x, y, zeta }
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergElement::new(vec![Q::zero(); n], vec![Q::zero(); n], Phase::one())
    }

    pub fn integral(x: &[i64], y: &[i64]) -> Self {
        HeisenbergElement::new(int_vec(x), int_vec(y), Phase::one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v = |a: &[Q]| a.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({ "x": v(&self.x), "y": v(&self.y), "zeta_angle": self.zeta.angle().to_string() })
    }
}

/// (x₁+x₂, y₁+y₂, ζ₁ζ₂e(σ(x₁,y₂))).
pub fn heisenberg_mul(p: &Pairing, h1: &HeisenbergElement, h2: &HeisenbergElement) -> HeisenbergElement {
    let zeta = h1.zeta.mul(&h2.zeta).mul(&Phase::from_angle(p.sigma(&h1.x, &h2.y)));
    HeisenbergElement::new(add_vec(&h1.x, &h2.x), add_vec(&h1.y, &h2.y), zeta)
}

/// (−x, −y, ζ⁻¹e(σ(x,y))).
pub fn heisenberg_inverse(p: &Pairing, h: &HeisenbergElement) -> HeisenbergElement {
    let zeta = h.zeta.inv().mul(&Phase::from_angle(p.sigma(&h.x, &h.y)));
    HeisenbergElement::new(neg_vec(&h.x), neg_vec(&h.y), zeta)
}

/// 2×2 rational matrix of determinant one, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2 {
    pub m: [[Q; 2]; 2],
}

impl Sl2 {
    pub fn new(m: [[Q; 2]; 2]) -> Result<Self> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if !det.is_one() {
            return Err(Error::Invalid(format!("SL2 element has determinant {det}")));
        }
        Ok(Sl2 { m })
    }

    pub fn from_int(m: [[i64; 2]; 2]) -> Result<Self> {
        Sl2::new([[qi(m[0][0]), qi(m[0][1])], [qi(m[1][0]), qi(m[1][1])]])
    }

    pub fn identity() -> Self {
        Sl2 { m: [[Q::one(), Q::zero()], [Q::zero(), Q::one()]] }
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        Sl2 { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    pub fn inverse(&self) -> Sl2 {
        let [[a, b], [c, d]] = &self.m;
        Sl2 { m: [[d.clone(), -b], [-c, a.clone()]] }
    }

    pub fn to_int(&self) -> Option<[[i64; 2]; 2]> {
        let v = integral(&[self.m[0][0].clone(), self.m[0][1].clone(), self.m[1][0].clone(), self.m[1][1].clone()])?;
        Some([[v[0], v[1]], [v[2], v[3]]])
    }

    fn f64s(&self) -> [[f64; 2]; 2] {
        let f = |x: &Q| x.to_f64().unwrap_or(f64::NAN);
        [[f(&self.m[0][0]), f(&self.m[0][1])], [f(&self.m[1][0]), f(&self.m[1][1])]]
    }
}

/// h^A = ((x,y)A, ζ·e(½σ(x',y') − ½σ(x,y))) with (x',y') = (ax+cy, bx+dy).
pub fn sl2_right_action(p: &Pairing, h: &HeisenbergElement, a: &Sl2) -> HeisenbergElement {
    let [[a11, a12], [a21, a22]] = &a.m;
    let x = lin(a11, &h.x, a21, &h.y);
    let y = lin(a12, &h.x, a22, &h.y);
    let half = Q::new(1.into(), 2.into());
    let angle = &half * (p.sigma(&x, &y) - p.sigma(&h.x, &h.y));
    let zeta = h.zeta.mul(&Phase::from_angle(angle));
    HeisenbergElement::new(x, y, zeta)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JacobiElement {
    pub a: Sl2,
    pub h: HeisenbergElement,
}

impl JacobiElement {
    pub fn identity(n: usize) -> Self {
        JacobiElement { a: Sl2::identity(), h: HeisenbergElement::identity(n) }
    }

    pub fn integral(d: [[i64; 2]; 2], x: &[i64], y: &[i64]) -> Result<Self> {
        Ok(JacobiElement { a: Sl2::from_int(d)?, h: HeisenbergElement::integral(x, y) })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let a: Vec<Vec<String>> = self.a.m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        json!({ "A": a, "h": self.h.to_json() })
    }
}

/// (A,h)·(A',h') = (AA', h^{A'}h').
pub fn jacobi_mul(p: &Pairing, g1: &JacobiElement, g2: &JacobiElement) -> JacobiElement {
    let moved = sl2_right_action(p, &g1.h, &g2.a);
    JacobiElement { a: g1.a.mul(&g2.a), h: heisenberg_mul(p, &moved, &g2.h) }
}

pub fn jacobi_inverse(p: &Pairing, g: &JacobiElement) -> JacobiElement {
    let ai = g.a.inverse();
    let hi = heisenberg_inverse(p, &g.h);
    JacobiElement { h: sl2_right_action(p, &hi, &ai), a: ai }
}

/// ι((D, [x,y])) = M_D·H_{x,y}. The phase is not part of J_S and is dropped.
pub fn jacobi_embed(space: &OrthSpace, g: &JacobiElement) -> Result<OrthElement> {
    let d = g.a.to_int().ok_or(Error::NonIntegralEmbed)?;
    let x = integral(&g.h.x).ok_or(Error::NonIntegralEmbed)?;
    let y = integral(&g.h.y).ok_or(Error::NonIntegralEmbed)?;
    if x.len() != space.n() {
        return Err(Error::Invalid(format!("Heisenberg element has length {}, lattice rank is {}", x.len(), space.n())));
    }
    Ok(space.rotation(d)?.mul(&space.heisenberg(&x, &y)))
}

/// ι(g₁)ι(g₂) = T_{t·e₁}·ι(g₁g₂); returns t, or None if the quotient is not of that form.
pub fn embedding_defect(space: &OrthSpace, g1: &JacobiElement, g2: &JacobiElement) -> Result<Option<i64>> {
    let p = Pairing::of(&space.lattice);
    let lhs = jacobi_embed(space, g1)?.mul(&jacobi_embed(space, g2)?);
    let rhs = jacobi_embed(space, &jacobi_mul(&p, g1, g2))?;
    let (l, r) = (lhs.exact.expect("integral"), rhs.exact.expect("integral"));
    let last = space.size() - 1;
    // T_{t e₁} carries t in the (ω, last) entry
    let t_guess = l.mul(&inverse_int(space, &r))[(1, last)];
    let mut lam = vec![0i64; space.tube_dim()];
    lam[0] = t_guess;
    let shifted = space.translation_int(&lam).exact.expect("integral").mul(&r);
    Ok((shifted == l).then_some(t_guess))
}

fn inverse_int(space: &OrthSpace, g: &IntMatrix) -> IntMatrix {
    space.inverse_closed_form(&OrthElement::from_int(g.clone())).exact.expect("integral inverse")
}

/// Lower-left (2 × (n+2)) block vanishes and gᵗS₁g = S₁.
pub fn in_parabolic(space: &OrthSpace, g: &OrthElement) -> bool {
    let Some(m) = &g.exact else { return false };
    let size = space.size();
    let lower_ok = (size - 2..size).all(|i| (0..size - 2).all(|j| m[(i, j)] == 0));
    let s1 = &space.forms.s1;
    lower_ok && s1.bracket(m) == *s1
}

/// The J_S action (D⟨τ⟩, (z + xτ + y)/(cτ + d)).
pub fn jacobi_action(g: &JacobiElement, tau: Complex64, z: &[Complex64]) -> (Complex64, Vec<Complex64>) {
    let [[a, b], [c, d]] = g.a.f64s();
    let j = c * tau + d;
    let x: Vec<f64> = g.h.x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    let y: Vec<f64> = g.h.y.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    let w = z.iter().zip(x.iter().zip(&y)).map(|(zi, (xi, yi))| (zi + xi * tau + yi) / j).collect();
    ((a * tau + b) / j, w)
}

/// max |Δ| between ι(g)⟨(ω,z,τ)⟩ and the J_S action on the (z, τ) part.
pub fn embedded_action_residual(space: &OrthSpace, g: &JacobiElement, pt: &TubePoint) -> Result<f64> {
    let m = jacobi_embed(space, g)?;
    let img = space.act(&m, pt)?;
    let (tau, z) = jacobi_action(g, pt.tau(), pt.z());
    let mut err = (img.tau() - tau).norm();
    for (a, b) in img.z().iter().zip(&z) {
        err = err.max((a - b).norm());
    }
    Ok(err)
}

pub type JacobiFn = Arc<dyn Fn(Complex64, &[Complex64]) -> Complex64 + Send + Sync>;

/// Slash operators of weight k for the form σ (scale S by m for index m).
#[derive(Clone)]
pub struct Slash {
    s: DMatrix<f64>,
    pub k: i64,
}

fn quad(s: &DMatrix<f64>, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::from(0.0);
    for i in 0..u.len() {
        for j in 0..v.len() {
            acc += u[i] * s[(i, j)] * v[j];
        }
    }
    acc
}

impl Slash {
    pub fn new(p: &Pairing, k: i64) -> Self {
        Slash { s: p.to_f64(), k }
    }

    /// f|M = (cτ+d)^{−k} e^{−πicσ(z,z)/(cτ+d)} f(Mτ, z/(cτ+d)).
    pub fn sl2(&self, f: JacobiFn, a: &Sl2) -> JacobiFn {
        let [[a1, b1], [c1, d1]] = a.f64s();
        let (s, k) = (self.s.clone(), self.k);
        Arc::new(move |tau: Complex64, z: &[Complex64]| {
            let j = c1 * tau + d1;
            let w: Vec<Complex64> = z.iter().map(|zi| zi / j).collect();
            let pre = j.powi(-k as i32) * (Complex64::new(0.0, -PI) * c1 * quad(&s, z, z) / j).exp();
            pre * f((a1 * tau + b1) / j, &w)
        })
    }

    /// f|h = ζ e^{πiτσ(x,x)+2πiσ(x,z)} f(τ, z + xτ + y).
    pub fn heisenberg(&self, f: JacobiFn, h: &HeisenbergElement) -> JacobiFn {
        let s = self.s.clone();
        let x: Vec<Complex64> = h.x.iter().map(|v| Complex64::from(v.to_f64().unwrap_or(f64::NAN))).collect();
        let y: Vec<f64> = h.y.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        let zeta = h.zeta.to_c64();
        Arc::new(move |tau: Complex64, z: &[Complex64]| {
            let w: Vec<Complex64> = z.iter().zip(x.iter().zip(&y)).map(|(zi, (xi, yi))| zi + xi * tau + yi).collect();
            let e = Complex64::new(0.0, PI) * (tau * quad(&s, &x, &x) + 2.0 * quad(&s, &x, z));
            zeta * e.exp() * f(tau, &w)
        })
    }

    /// f|(A,h) = (f|A)|h.
    pub fn jacobi(&self, f: JacobiFn, g: &JacobiElement) -> JacobiFn {
        self.heisenberg(self.sl2(f, &g.a), &g.h)
    }
}

/// A Gaussian-type test function e^{πiτσ(c,c)} Π exp(α_j z_j − β z_j²) · (τ + γ)^{-1}.
pub fn gaussian_test_function(n: usize, seed: u64) -> JacobiFn {
    let alpha: Vec<Complex64> = (0..n).map(|j| Complex64::new(0.3 + 0.1 * j as f64, 0.05 * (seed % 7) as f64)).collect();
    let beta = Complex64::new(0.2, 0.1);
    let gamma = Complex64::new(0.4, 2.0);
    Arc::new(move |tau: Complex64, z: &[Complex64]| {
        let mut e = Complex64::new(0.0, 0.7) * tau;
        for (zj, aj) in z.iter().zip(&alpha) {
            e += aj * zj - beta * zj * zj;
        }
        e.exp() / (tau + gamma)
    })
}

/// Heisenberg prefactor check: (f|h)(τ,z)/f(τ, z+xτ+y) against ζe^{πiτσ(x,x)+2πiσ(x,z)}.
pub fn heisenberg_prefactor_residual(p: &Pairing, h: &HeisenbergElement, f: JacobiFn, tau: Complex64, z: &[Complex64]) -> f64 {
    let slash = Slash::new(p, 0);
    let g = slash.heisenberg(f.clone(), h);
    let xs: Vec<Q> = h.x.clone();
    let w: Vec<Complex64> = z
        .iter()
        .enumerate()
        .map(|(i, zi)| zi + xs[i].to_f64().unwrap_or(0.0) * tau + h.y[i].to_f64().unwrap_or(0.0))
        .collect();
    let sxx = p.sigma(&h.x, &h.x).to_f64().unwrap_or(f64::NAN);
    let xr: Vec<Complex64> = h.x.iter().map(|v| Complex64::from(v.to_f64().unwrap_or(0.0))).collect();
    let sxz = quad(&p.to_f64(), &xr, z);
    let want = h.zeta.to_c64() * (Complex64::new(0.0, PI) * (tau * sxx + 2.0 * sxz)).exp();
    let got = g(tau, z) / f(tau, &w);
    (got - want).norm() / want.norm()
}

/// Relative mismatch of (f|g₁)|g₂ against f|(g₁g₂) at the given points.
pub fn slash_composition_residual(
    p: &Pairing,
    k: i64,
    f: JacobiFn,
    g1: &JacobiElement,
    g2: &JacobiElement,
    points: &[(Complex64, Vec<Complex64>)],
) -> f64 {
    let slash = Slash::new(p, k);
    let lhs = slash.jacobi(slash.jacobi(f.clone(), g1), g2);
    let rhs = slash.jacobi(f, &jacobi_mul(p, g1, g2));
    let mut worst = 0.0f64;
    for (tau, z) in points {
        let (a, b) = (lhs(*tau, z), rhs(*tau, z));
        worst = worst.max((a - b).norm() / b.norm().max(f64::MIN_POSITIVE));
    }
    worst
}

/// Random rational Jacobi element with small entries; random SL2(ℤ) when `integral`.
pub fn random_jacobi<R: rand::Rng>(rng: &mut R, n: usize, integral: bool) -> JacobiElement {
    let a = random_sl2(rng);
    let den = if integral { 1 } else { 6 };
    let mut v = || -> Vec<Q> { (0..n).map(|_| Q::new(rng.gen_range(-4i64..=4).into(), den.into())).collect() };
    let (x, y) = (v(), v());
    let zeta = if integral { Phase::one() } else { Phase::from_angle(Q::new(rng.gen_range(0i64..12).into(), 12.into())) };
    JacobiElement { a, h: HeisenbergElement::new(x, y, zeta) }
}

/// Product of a few elementary matrices T^{±a}, S.
pub fn random_sl2<R: rand::Rng>(rng: &mut R) -> Sl2 {
    let mut m = Sl2::identity();
    for _ in 0..rng.gen_range(0..4) {
        let t = rng.gen_range(-2i64..=2);
        let e = if rng.gen_bool(0.5) { [[1, t], [0, 1]] } else { [[1, 0], [t, 1]] };
        m = m.mul(&Sl2::from_int(e).expect("unimodular"));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn a2() -> (GramLattice, Pairing) {
        let l = catalog("A2").unwrap();
        let p = Pairing::of(&l);
        (l, p)
    }

    #[test]
    fn heisenberg_group_axioms() {
        let (_, p) = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let [g1, g2, g3] = [0, 1, 2].map(|_| random_jacobi(&mut rng, 2, false).h);
            let left = heisenberg_mul(&p, &heisenberg_mul(&p, &g1, &g2), &g3);
            let right = heisenberg_mul(&p, &g1, &heisenberg_mul(&p, &g2, &g3));
            assert_eq!(left, right);
            assert_eq!(heisenberg_mul(&p, &g1, &heisenberg_inverse(&p, &g1)), HeisenbergElement::identity(2));
            assert_eq!(heisenberg_mul(&p, &g1, &HeisenbergElement::identity(2)), g1);
        }
    }

    #[test]
    fn right_action_axioms() {
        let (_, p) = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let h1 = random_jacobi(&mut rng, 2, false).h;
            let h2 = random_jacobi(&mut rng, 2, false).h;
            let (a, b) = (random_sl2(&mut rng), random_sl2(&mut rng));
            assert_eq!(sl2_right_action(&p, &h1, &Sl2::identity()), h1);
            assert_eq!(sl2_right_action(&p, &sl2_right_action(&p, &h1, &a), &b), sl2_right_action(&p, &h1, &a.mul(&b)));
            let prod = sl2_right_action(&p, &heisenberg_mul(&p, &h1, &h2), &a);
            assert_eq!(prod, heisenberg_mul(&p, &sl2_right_action(&p, &h1, &a), &sl2_right_action(&p, &h2, &a)));
        }
    }

    #[test]
    fn jacobi_group_axioms() {
        let (_, p) = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let [g1, g2, g3] = [0, 1, 2].map(|_| random_jacobi(&mut rng, 2, false));
            let left = jacobi_mul(&p, &jacobi_mul(&p, &g1, &g2), &g3);
            let right = jacobi_mul(&p, &g1, &jacobi_mul(&p, &g2, &g3));
            assert_eq!(left, right);
            assert_eq!(jacobi_mul(&p, &g1, &jacobi_inverse(&p, &g1)), JacobiElement::identity(2));
        }
    }

    #[test]
    fn embedding_lands_in_parabolic() {
        let (l, _) = a2();
        let space = OrthSpace::new(l);
        assert_eq!(jacobi_embed(&space, &JacobiElement::identity(2)).unwrap(), space.identity());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let g = random_jacobi(&mut rng, 2, true);
            assert!(in_parabolic(&space, &jacobi_embed(&space, &g).unwrap()));
        }
        let bad = random_jacobi(&mut rng, 2, false);
        if bad.h.x.iter().any(|v| !v.is_integer()) {
            assert_eq!(jacobi_embed(&space, &bad), Err(Error::NonIntegralEmbed));
        }
    }

    #[test]
    fn embedding_is_homomorphic_up_to_center() {
        let (l, _) = a2();
        let space = OrthSpace::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g1 = random_jacobi(&mut rng, 2, true);
            let g2 = random_jacobi(&mut rng, 2, true);
            assert!(embedding_defect(&space, &g1, &g2).unwrap().is_some(), "{g1:?} {g2:?}");
        }
    }

    #[test]
    fn embedded_action_matches() {
        let (l, _) = a2();
        let space = OrthSpace::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let g = random_jacobi(&mut rng, 2, true);
            let pt = space.random_point(&mut rng);
            assert!(embedded_action_residual(&space, &g, &pt).unwrap() < 1e-10);
        }
    }

    #[test]
    fn slash_composition() {
        let (_, p) = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = gaussian_test_function(2, 1);
        let points: Vec<(Complex64, Vec<Complex64>)> = (0..20)
            .map(|_| {
                let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.6));
                let z = (0..2).map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3))).collect();
                (tau, z)
            })
            .collect();
        for _ in 0..10 {
            let g1 = random_jacobi(&mut rng, 2, false);
            let g2 = random_jacobi(&mut rng, 2, false);
            let r = slash_composition_residual(&p, 3, f.clone(), &g1, &g2, &points);
            assert!(r < 1e-9, "{r}");
        }
    }

    #[test]
    fn heisenberg_prefactor() {
        let (_, p) = a2();
        let h = HeisenbergElement::integral(&[1, -1], &[2, 0]);
        let r = heisenberg_prefactor_residual(&p, &h, gaussian_test_function(2, 0), Complex64::new(0.1, 1.2), &[Complex64::new(0.2, 0.1), Complex64::new(-0.1, 0.05)]);
        assert!(r < 1e-12);
    }
}
