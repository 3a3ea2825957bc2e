//! Siegel upper half space of degree 2, the Sp₂ action, and the symbolic
//! operator calculus on it.

pub mod eisenstein;
pub mod exppoly;
pub mod onedim;
pub mod ops;
pub mod structure;

use crate::error::{Error, Result};
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

/// Z = (z₁ z₃ / z₃ z₂) with Im Z positive definite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SiegelPoint {
    pub z: [Complex64; 3],
}

impl SiegelPoint {
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self> {
        let p = SiegelPoint { z: [z1, z2, z3] };
        let (y1, y2, y3) = (z1.im, z2.im, z3.im);
        if y1 > 0.0 && y1 * y2 - y3 * y3 > 0.0 {
            Ok(p)
        } else {
            Err(Error::Invalid(format!("Im Z is not positive definite: ({y1}, {y2}, {y3})")))
        }
    }

    pub fn from_matrix(m: &Matrix2<Complex64>) -> Result<Self> {
        let off = 0.5 * (m[(0, 1)] + m[(1, 0)]);
        Self::new(m[(0, 0)], m[(1, 1)], off)
    }

    /// i·t·identity.
    pub fn scalar(t: f64) -> Self {
        let it = Complex64::new(0.0, t);
        SiegelPoint { z: [it, it, Complex64::from(0.0)] }
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.z[0], self.z[2], self.z[2], self.z[1])
    }

    pub fn x(&self) -> [f64; 3] {
        [self.z[0].re, self.z[1].re, self.z[2].re]
    }

    pub fn y(&self) -> [f64; 3] {
        [self.z[0].im, self.z[1].im, self.z[2].im]
    }

    pub fn y_matrix(&self) -> Matrix2<f64> {
        let y = self.y();
        Matrix2::new(y[0], y[2], y[2], y[1])
    }

    pub fn det_y(&self) -> f64 {
        let y = self.y();
        y[0] * y[1] - y[2] * y[2]
    }

    /// Smallest eigenvalue of Im Z.
    pub fn y_min_eigen(&self) -> f64 {
        let y = self.y();
        let mean = 0.5 * (y[0] + y[1]);
        let rad = (0.25 * (y[0] - y[1]).powi(2) + y[2] * y[2]).sqrt();
        mean - rad
    }

    pub fn max_diff(&self, other: &SiegelPoint) -> f64 {
        (0..3).map(|k| (self.z[k] - other.z[k]).norm()).fold(0.0, f64::max)
    }
}

/// g = (A B / C D) with gᵗJg = J.
#[derive(Clone, Debug, PartialEq)]
pub struct SpElement {
    pub m: Matrix4<f64>,
    pub integral: bool,
}

impl SpElement {
    pub fn from_blocks(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>, d: Matrix2<f64>) -> Self {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&d);
        let integral = m.iter().all(|v| v.fract() == 0.0);
        SpElement { m, integral }
    }

    pub fn from_int(rows: [[i64; 4]; 4]) -> Self {
        let m = Matrix4::from_fn(|i, j| rows[i][j] as f64);
        SpElement { m, integral: true }
    }

    pub fn a(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 0).into_owned()
    }
    pub fn b(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 2).into_owned()
    }
    pub fn c(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(2, 0).into_owned()
    }
    pub fn d(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn identity() -> Self {
        SpElement { m: Matrix4::identity(), integral: true }
    }

    /// J = (0 −1 / 1 0).
    pub fn inversion() -> Self {
        let one = Matrix2::identity();
        Self::from_blocks(Matrix2::zeros(), -one, one, Matrix2::zeros())
    }

    /// Z ↦ Z + T for symmetric T.
    pub fn translation(t: [[f64; 2]; 2]) -> Self {
        let t = Matrix2::new(t[0][0], t[0][1], t[1][0], t[1][1]);
        Self::from_blocks(Matrix2::identity(), t, Matrix2::zeros(), Matrix2::identity())
    }

    /// Z ↦ UZUᵗ for U ∈ GL₂.
    pub fn conjugation(u: [[f64; 2]; 2]) -> Self {
        let u = Matrix2::new(u[0][0], u[0][1], u[1][0], u[1][1]);
        let uit = u.try_inverse().expect("U invertible").transpose();
        Self::from_blocks(u, Matrix2::zeros(), Matrix2::zeros(), uit)
    }

    pub fn mul(&self, other: &SpElement) -> SpElement {
        SpElement { m: self.m * other.m, integral: self.integral && other.integral }
    }

    /// ‖gᵗJg − J‖∞.
    pub fn symplectic_residual(&self) -> f64 {
        let j = Self::inversion().m;
        (self.m.transpose() * j * self.m - j).amax()
    }
}

/// (g⟨Z⟩, det(CZ + D)).
pub fn sp2_act(g: &SpElement, z: &SiegelPoint) -> Result<(SiegelPoint, Complex64)> {
    let c2 = |m: Matrix2<f64>| m.map(Complex64::from);
    let zm = z.matrix();
    let num = c2(g.a()) * zm + c2(g.b());
    let den = c2(g.c()) * zm + c2(g.d());
    let j = den.determinant();
    if j.norm() < 1e-300 {
        return Err(Error::SingularDenominator);
    }
    let inv = den.try_inverse().ok_or(Error::SingularDenominator)?;
    Ok((SiegelPoint::from_matrix(&(num * inv))?, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_at_i() {
        let i = SiegelPoint::scalar(1.0);
        let (w, j) = sp2_act(&SpElement::inversion(), &i).unwrap();
        assert!(w.max_diff(&i) < 1e-15);
        assert!((j + 1.0).norm() < 1e-15);
        let (w, j) = sp2_act(&SpElement::identity(), &i).unwrap();
        assert_eq!(w, i);
        assert_eq!(j, Complex64::from(1.0));
    }

    #[test]
    fn det_im_transforms() {
        let z = SiegelPoint::new(Complex64::new(0.3, 1.2), Complex64::new(-0.4, 0.9), Complex64::new(0.1, 0.2)).unwrap();
        let g = SpElement::inversion().mul(&SpElement::translation([[1.0, 1.0], [1.0, 0.0]])).mul(&SpElement::conjugation([[1.0, 1.0], [0.0, 1.0]]));
        assert!(g.symplectic_residual() < 1e-14);
        let (w, j) = sp2_act(&g, &z).unwrap();
        assert!((w.det_y() - z.det_y() / j.norm_sqr()).abs() < 1e-12);
    }
}
