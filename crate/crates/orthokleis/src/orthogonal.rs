//! SO(S₁) over ℝ acting on the tube domain 𝓗_S ⊂ ℂ^{n+2}.
//!
//! A point is Z = (ω, z, τ) with imaginary part in the cone
//! { y : y₁ > 0, Q₀[y] > 0 }. Matrices are split into blocks
//! (α aᵗ β / b A c / γ dᵗ δ) with the middle block of size n+2.

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::lattice::{BorderedForms, GramLattice};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TubePoint {
    /// (ω, z₁, …, zₙ, τ).
    pub coords: Vec<Complex64>,
}

impl TubePoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        TubePoint { coords }
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Self {
        TubePoint { coords: re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn omega(&self) -> Complex64 {
        self.coords[0]
    }

    pub fn z(&self) -> &[Complex64] {
        &self.coords[1..self.coords.len() - 1]
    }

    pub fn tau(&self) -> Complex64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn re(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.im).collect()
    }

    pub fn max_diff(&self, other: &TubePoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// An element of SO(S₁)(ℝ); `exact` holds the integer matrix when there is one.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthElement {
    pub m: DMatrix<f64>,
    pub exact: Option<IntMatrix>,
}

#[derive(Serialize)]
struct ElementJson {
    rows: Vec<Vec<serde_json::Value>>,
    exact: bool,
}

impl OrthElement {
    pub fn from_int(m: IntMatrix) -> Self {
        OrthElement { m: m.to_f64(), exact: Some(m) }
    }

    pub fn from_real(m: DMatrix<f64>) -> Self {
        OrthElement { m, exact: None }
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn mul(&self, other: &OrthElement) -> OrthElement {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => OrthElement::from_int(a.mul(b)),
            _ => OrthElement::from_real(&self.m * &other.m),
        }
    }

    /// Row-major JSON; exact elements keep integer entries.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = match &self.exact {
            Some(e) => e.to_rows().into_iter().map(|r| r.into_iter().map(serde_json::Value::from).collect()).collect(),
            None => (0..self.size()).map(|i| (0..self.size()).map(|j| serde_json::Value::from(self.m[(i, j)])).collect()).collect(),
        };
        serde_json::to_value(ElementJson { rows, exact: self.is_exact() }).expect("serializable")
    }
}

/// Lattice context for the group: S, S₀, S₁ in exact and floating form.
#[derive(Clone, Debug)]
pub struct OrthSpace {
    pub lattice: GramLattice,
    pub forms: BorderedForms,
    pub s0: DMatrix<f64>,
    pub s1: DMatrix<f64>,
    s0_inv: DMatrix<f64>,
}

impl OrthSpace {
    pub fn new(lattice: GramLattice) -> Self {
        let forms = lattice.bordered();
        let s0 = forms.s0.to_f64();
        let s1 = forms.s1.to_f64();
        let s0_inv = s0.clone().try_inverse().expect("S0 is invertible");
        OrthSpace { lattice, forms, s0, s1, s0_inv }
    }

    /// n, the rank of S.
    pub fn n(&self) -> usize {
        self.lattice.rank()
    }

    /// n + 2, the tube domain dimension.
    pub fn tube_dim(&self) -> usize {
        self.n() + 2
    }

    /// n + 4, the size of group elements.
    pub fn size(&self) -> usize {
        self.n() + 4
    }

    pub fn q0(&self, y: &[f64]) -> f64 {
        self.forms.q0(y)
    }

    /// ½ xᵗS₀y on real vectors.
    pub fn phi0(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..x.len() {
            for j in 0..y.len() {
                acc += x[i] * self.s0[(i, j)] * y[j];
            }
        }
        0.5 * acc
    }

    /// S₀[Z] = ZᵗS₀Z, bilinear in Z (no conjugation).
    pub fn s0_of(&self, z: &[Complex64]) -> Complex64 {
        let d = z.len();
        let mut acc = Complex64::zero();
        for i in 0..d {
            for j in 0..d {
                let a = self.s0[(i, j)];
                if a != 0.0 {
                    acc += z[i] * z[j] * a;
                }
            }
        }
        acc
    }

    /// I = (i, 0, …, 0, i).
    pub fn base_point(&self) -> TubePoint {
        let d = self.tube_dim();
        let mut c = vec![Complex64::zero(); d];
        c[0] = Complex64::i();
        c[d - 1] = Complex64::i();
        TubePoint::new(c)
    }

    pub fn in_domain(&self, z: &TubePoint) -> bool {
        let y = z.im();
        y[0] > 0.0 && self.q0(&y) > 0.0
    }

    pub fn check_point(&self, z: &TubePoint) -> Result<()> {
        if z.dim() != self.tube_dim() {
            return Err(Error::Invalid(format!("point has {} coordinates, expected {}", z.dim(), self.tube_dim())));
        }
        let y = z.im();
        if self.in_domain(z) {
            Ok(())
        } else {
            Err(Error::NotInDomain { y1: y[0], q0: self.q0(&y) })
        }
    }

    pub fn automorphy(&self, g: &OrthElement, z: &TubePoint) -> Complex64 {
        let m = &g.m;
        let last = self.size() - 1;
        let q = self.s0_of(&z.coords);
        let mut j = -0.5 * q * m[(last, 0)] + m[(last, last)];
        for (k, zk) in z.coords.iter().enumerate() {
            j += zk * m[(last, k + 1)];
        }
        j
    }

    /// g⟨Z⟩ = (−½S₀[Z]b + AZ + c) / j(g, Z).
    pub fn act(&self, g: &OrthElement, z: &TubePoint) -> Result<TubePoint> {
        let m = &g.m;
        let d = self.tube_dim();
        let last = self.size() - 1;
        let q = self.s0_of(&z.coords);
        let j = self.automorphy(g, z);
        if j.norm() < 1e-12 {
            return Err(Error::DomainExit { y1: f64::NAN, q0: f64::NAN, j_abs: j.norm() });
        }
        let mut out = Vec::with_capacity(d);
        for r in 1..=d {
            let mut v = -0.5 * q * m[(r, 0)] + m[(r, last)];
            for (k, zk) in z.coords.iter().enumerate() {
                v += zk * m[(r, k + 1)];
            }
            out.push(v / j);
        }
        let w = TubePoint::new(out);
        if !self.in_domain(&w) {
            let y = w.im();
            return Err(Error::DomainExit { y1: y[0], q0: self.q0(&y), j_abs: j.norm() });
        }
        Ok(w)
    }

    pub fn identity(&self) -> OrthElement {
        OrthElement::from_int(IntMatrix::identity(self.size()))
    }

    /// T_λ: Z ↦ Z + λ. Exact when λ is integral.
    pub fn translation(&self, lambda: &[f64]) -> OrthElement {
        let d = self.tube_dim();
        let last = d + 1;
        let mut m = DMatrix::identity(d + 2, d + 2);
        for k in 0..d {
            let mut s = 0.0;
            for i in 0..d {
                s += lambda[i] * self.s0[(i, k)];
            }
            m[(0, k + 1)] = -s;
            m[(k + 1, last)] = lambda[k];
        }
        m[(0, last)] = -self.q0(lambda);
        if lambda.iter().all(|x| x.fract() == 0.0 && x.abs() < 1e15) {
            let int: Vec<i64> = lambda.iter().map(|&x| x as i64).collect();
            return self.translation_int(&int);
        }
        OrthElement::from_real(m)
    }

    pub fn translation_int(&self, lambda: &[i64]) -> OrthElement {
        let d = self.tube_dim();
        let last = d + 1;
        let s0 = &self.forms.s0;
        let mut m = IntMatrix::identity(d + 2);
        let ls = s0.mul_vec(lambda);
        for k in 0..d {
            m[(0, k + 1)] = -ls[k];
            m[(k + 1, last)] = lambda[k];
        }
        m[(0, last)] = -s0.bilinear(lambda, lambda) / 2;
        OrthElement::from_int(m)
    }

    /// H_{x,y}: acts by z ↦ z + xτ + y on the lattice coordinates.
    pub fn heisenberg(&self, x: &[i64], y: &[i64]) -> OrthElement {
        let n = self.n();
        let size = self.size();
        let s = self.lattice.gram();
        let mut m = IntMatrix::identity(size);
        let xs = s.mul_vec(x);
        let ys = s.mul_vec(y);
        for k in 0..n {
            m[(0, 2 + k)] = ys[k];
            m[(1, 2 + k)] = xs[k];
            m[(2 + k, size - 2)] = x[k];
            m[(2 + k, size - 1)] = y[k];
        }
        m[(0, size - 1)] = s.bilinear(y, y) / 2;
        m[(1, size - 2)] = s.bilinear(x, x) / 2;
        m[(1, size - 1)] = s.bilinear(x, y);
        OrthElement::from_int(m)
    }

    /// M_D = diag(D*, 1ₙ, D) with D* = (a, −b; −c, d); acts on τ by D.
    pub fn rotation(&self, d: [[i64; 2]; 2]) -> Result<OrthElement> {
        if d[0][0] * d[1][1] - d[0][1] * d[1][0] != 1 {
            return Err(Error::Invalid("rotation needs det D = 1".into()));
        }
        let size = self.size();
        let mut m = IntMatrix::identity(size);
        m[(0, 0)] = d[0][0];
        m[(0, 1)] = -d[0][1];
        m[(1, 0)] = -d[1][0];
        m[(1, 1)] = d[1][1];
        m[(size - 2, size - 2)] = d[0][0];
        m[(size - 2, size - 1)] = d[0][1];
        m[(size - 1, size - 2)] = d[1][0];
        m[(size - 1, size - 1)] = d[1][1];
        Ok(OrthElement::from_int(m))
    }

    /// diag(1, A, 1) for A preserving S₀; acts by Z ↦ AZ.
    pub fn levi(&self, a: &DMatrix<f64>) -> OrthElement {
        let d = self.tube_dim();
        let mut m = DMatrix::identity(d + 2, d + 2);
        m.view_mut((1, 1), (d, d)).copy_from(a);
        OrthElement::from_real(m)
    }

    pub fn levi_int(&self, a: &IntMatrix) -> OrthElement {
        let d = self.tube_dim();
        let mut m = IntMatrix::identity(d + 2);
        for i in 0..d {
            for j in 0..d {
                m[(i + 1, j + 1)] = a[(i, j)];
            }
        }
        OrthElement::from_int(m)
    }

    /// diag(t, 1_{n+2}, 1/t); acts by Z ↦ tZ.
    pub fn scale(&self, t: f64) -> OrthElement {
        let size = self.size();
        let mut m = DMatrix::identity(size, size);
        m[(0, 0)] = t;
        m[(size - 1, size - 1)] = 1.0 / t;
        OrthElement::from_real(m)
    }

    /// σ_w(x) = x − 2φ₀(x, w)/φ₀(w, w)·w on V₀, as an (n+2)-matrix.
    pub fn reflection(&self, w: &[f64]) -> Result<DMatrix<f64>> {
        let ww = self.phi0(w, w);
        if ww.abs() < 1e-14 {
            return Err(Error::IsotropicReflectionVector);
        }
        let d = self.tube_dim();
        let ws0: Vec<f64> = (0..d).map(|k| (0..d).map(|i| w[i] * self.s0[(i, k)]).sum()).collect();
        Ok(DMatrix::from_fn(d, d, |i, j| f64::from(u8::from(i == j)) - w[i] * ws0[j] / ww))
    }

    /// Integral reflection in w with Q₀[w] = ±1.
    pub fn reflection_int(&self, w: &[i64]) -> Result<IntMatrix> {
        let s0 = &self.forms.s0;
        let ww = s0.bilinear(w, w);
        if ww == 0 {
            return Err(Error::IsotropicReflectionVector);
        }
        if ww.abs() != 2 {
            return Err(Error::Invalid("integral reflection needs Q0[w] = ±1".into()));
        }
        let d = self.tube_dim();
        let ws0 = s0.mul_vec(w);
        let sgn = ww / 2;
        let mut m = IntMatrix::identity(d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] -= sgn * w[i] * ws0[j];
            }
        }
        Ok(m)
    }

    /// The embedded product σ_u σ_v.
    pub fn reflection_pair(&self, u: &[f64], v: &[f64]) -> Result<OrthElement> {
        let a = self.reflection(u)? * self.reflection(v)?;
        Ok(self.levi(&a))
    }

    /// g⁻¹ = S₁⁻¹gᵗS₁ written blockwise:
    /// (δ, cᵗS₀, β / S₀⁻¹d, S₀⁻¹AᵗS₀, S₀⁻¹a / γ, bᵗS₀, α).
    pub fn inverse_closed_form(&self, g: &OrthElement) -> OrthElement {
        let size = self.size();
        let d = self.tube_dim();
        let last = size - 1;
        let m = &g.m;
        let alpha = m[(0, 0)];
        let beta = m[(0, last)];
        let gamma = m[(last, 0)];
        let delta = m[(last, last)];
        let a_row = m.view((0, 1), (1, d)).transpose();
        let b_col = m.view((1, 0), (d, 1)).into_owned();
        let c_col = m.view((1, last), (d, 1)).into_owned();
        let d_row = m.view((last, 1), (1, d)).transpose();
        let a_mid = m.view((1, 1), (d, d)).into_owned();
        let mut inv = DMatrix::zeros(size, size);
        inv[(0, 0)] = delta;
        inv[(0, last)] = beta;
        inv[(last, 0)] = gamma;
        inv[(last, last)] = alpha;
        inv.view_mut((0, 1), (1, d)).copy_from(&(c_col.transpose() * &self.s0));
        inv.view_mut((last, 1), (1, d)).copy_from(&(b_col.transpose() * &self.s0));
        inv.view_mut((1, 0), (d, 1)).copy_from(&(&self.s0_inv * d_row));
        inv.view_mut((1, last), (d, 1)).copy_from(&(&self.s0_inv * a_row));
        inv.view_mut((1, 1), (d, d)).copy_from(&(&self.s0_inv * a_mid.transpose() * &self.s0));
        match &g.exact {
            Some(e) => OrthElement::from_int(self.exact_inverse(e)),
            None => OrthElement::from_real(inv),
        }
    }

    /// Same formula over ℚ; the result is integral for integral g.
    fn exact_inverse(&self, g: &IntMatrix) -> IntMatrix {
        let s1 = &self.forms.s1;
        let s1_inv = crate::lattice::rational_inverse(s1).expect("S1 invertible");
        let gt_s1 = g.transpose().mul(s1);
        let size = self.size();
        let mut out = IntMatrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                let mut acc = BigRational::zero();
                for (k, sik) in s1_inv[i].iter().enumerate() {
                    if !sik.is_zero() {
                        acc += sik * BigRational::from_integer(BigInt::from(gt_s1[(k, j)]));
                    }
                }
                assert!(acc.is_integer(), "inverse of an integral element must be integral");
                out[(i, j)] = acc.to_integer().to_i64().expect("fits");
            }
        }
        out
    }

    /// g⟨I⟩ lies in 𝓗_S.
    pub fn in_identity_component(&self, g: &OrthElement) -> bool {
        self.act(g, &self.base_point()).is_ok()
    }

    /// (‖gᵗS₁g − S₁‖∞, |det g − 1|).
    pub fn group_residual(&self, g: &OrthElement) -> (f64, f64) {
        if let Some(e) = &g.exact {
            let ok = self.forms.s1.bracket(e) == self.forms.s1;
            let det = e.det();
            return (if ok { 0.0 } else { f64::INFINITY }, (det - BigInt::from(1)).to_f64().unwrap_or(f64::INFINITY).abs());
        }
        let r = g.m.transpose() * &self.s1 * &g.m - &self.s1;
        (r.amax(), (g.m.determinant() - 1.0).abs())
    }

    /// A random point of 𝓗_S with moderate imaginary part.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> TubePoint {
        let d = self.tube_dim();
        let n = self.n();
        let s = self.lattice.gram().to_f64();
        loop {
            let re: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut im = vec![0.0; d];
            im[0] = rng.gen_range(0.6..1.8);
            im[d - 1] = rng.gen_range(0.6..1.8);
            for v in im.iter_mut().take(n + 1).skip(1) {
                *v = rng.gen_range(-0.3..0.3);
            }
            let mid = nalgebra::DVector::from_column_slice(&im[1..=n]);
            let q = im[0] * im[d - 1] - 0.5 * (mid.transpose() * &s * &mid)[(0, 0)];
            if q > 0.2 {
                return TubePoint::from_parts(&re, &im);
            }
        }
    }

    /// Integral vectors w with Q₀[w] = −1, whose reflections preserve 𝓗_S.
    pub fn spacelike_units(&self) -> Vec<Vec<i64>> {
        let d = self.tube_dim();
        let mut out = Vec::new();
        let mut w = vec![0; d];
        w[0] = 1;
        w[d - 1] = -1;
        out.push(w);
        for r in crate::lattice::short_vectors(&self.lattice, 2).vectors {
            let mut w = vec![0; d];
            w[1..=self.n()].copy_from_slice(&r);
            out.push(w);
        }
        out
    }

    /// A random exact word of the given length in the integral builders.
    pub fn random_word<R: Rng>(&self, rng: &mut R, len: usize) -> OrthElement {
        let d = self.tube_dim();
        let n = self.n();
        let units = self.spacelike_units();
        let mut g = self.identity();
        for _ in 0..len {
            let step = match rng.gen_range(0..4) {
                0 => {
                    let lam: Vec<i64> = (0..d).map(|_| rng.gen_range(-1..=1)).collect();
                    self.translation_int(&lam)
                }
                1 => {
                    let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
                    let y: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
                    self.heisenberg(&x, &y)
                }
                2 => {
                    let gens = [[[1, 1], [0, 1]], [[1, -1], [0, 1]], [[0, -1], [1, 0]], [[1, 0], [1, 1]]];
                    self.rotation(gens[rng.gen_range(0..gens.len())]).expect("det 1")
                }
                _ => {
                    let u = &units[rng.gen_range(0..units.len())];
                    let v = &units[rng.gen_range(0..units.len())];
                    let a = self.reflection_int(u).expect("unit").mul(&self.reflection_int(v).expect("unit"));
                    self.levi_int(&a)
                }
            };
            g = g.mul(&step);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(name: &str) -> OrthSpace {
        OrthSpace::new(catalog(name).unwrap())
    }

    #[test]
    fn translation_and_scaling_act_as_expected() {
        let sp = space("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = sp.random_point(&mut rng);
        assert!(sp.act(&sp.identity(), &z).unwrap().max_diff(&z) < 1e-15);
        let lam = [0.25, -1.5, 0.75, 2.0];
        let t = sp.translation(&lam);
        let moved = sp.act(&t, &z).unwrap();
        for k in 0..4 {
            assert!((moved.coords[k] - z.coords[k] - lam[k]).norm() < 1e-12);
        }
        assert!((sp.automorphy(&t, &z) - 1.0).norm() < 1e-12);
        let doubled = sp.act(&sp.scale(2.0), &z).unwrap();
        for k in 0..4 {
            assert!((doubled.coords[k] - 2.0 * z.coords[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn builders_preserve_form() {
        let sp = space("E8");
        let checks = [
            sp.translation_int(&[1, 0, -1, 2, 0, 0, 1, 0, 0, 3]),
            sp.heisenberg(&[1, 0, 0, -1, 0, 2, 0, 0], &[0, 1, 1, 0, 0, 0, -1, 0]),
            sp.rotation([[2, 1], [1, 1]]).unwrap(),
            sp.translation(&[0.3, 0.1, 0.0, 0.0, 0.0, 0.2, 0.0, 0.0, 0.0, -0.7]),
        ];
        for g in &checks {
            let (r, d) = sp.group_residual(g);
            assert!(r < 1e-10 && d < 1e-10, "{r} {d}");
        }
    }

    #[test]
    fn reflection_pair_of_equal_vectors_is_identity() {
        let sp = space("A1");
        let g = sp.reflection_pair(&[0.2, 1.0, 0.4], &[0.2, 1.0, 0.4]).unwrap();
        assert!((g.m - DMatrix::identity(5, 5)).amax() < 1e-12);
        assert_eq!(sp.reflection(&[1.0, 0.0, 0.0]), Err(Error::IsotropicReflectionVector));
    }

    #[test]
    fn identity_component_test() {
        let sp = space("A2");
        assert!(sp.in_identity_component(&sp.identity()));
        let mut flip = DMatrix::identity(6, 6);
        flip[(0, 0)] = -1.0;
        flip[(5, 5)] = -1.0;
        assert!(!sp.in_identity_component(&OrthElement::from_real(flip)));
        assert!(sp.in_identity_component(&sp.translation(&[0.5, 1.0, -2.0, 3.0])));
    }

    #[test]
    fn heisenberg_moves_lattice_coordinates() {
        let sp = space("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = sp.random_point(&mut rng);
        let (x, y) = ([1, -2], [0, 3]);
        let w = sp.act(&sp.heisenberg(&x, &y), &z).unwrap();
        for k in 0..2 {
            let expect = z.z()[k] + z.tau() * x[k] as f64 + y[k] as f64;
            assert!((w.z()[k] - expect).norm() < 1e-12);
        }
        assert!((w.tau() - z.tau()).norm() < 1e-12);
    }

    #[test]
    fn closed_form_inverse_on_words() {
        let sp = space("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let g = sp.random_word(&mut rng, 6);
            let inv = sp.inverse_closed_form(&g);
            assert_eq!(g.exact.as_ref().unwrap().mul(inv.exact.as_ref().unwrap()), IntMatrix::identity(6));
            let real = sp.inverse_closed_form(&OrthElement::from_real(g.m.clone()));
            let numeric = g.m.clone().try_inverse().unwrap();
            assert!((real.m - numeric).amax() < 1e-8 * (1.0 + g.m.amax()).powi(2));
        }
    }
}
