//! Majorants of S₁: symmetric positive definite R with R S₁⁻¹ R = S₁.
//!
//! The majorant attached to a point Z is R_I[δ⁻¹] where δ⟨I⟩ = Z and
//! R_I = diag(1, 1, S, 1, 1). The transport δ is a translation after a
//! scaling after a hyperboloid rotation made of two reflections; any choice
//! gives the same R_Z, and [`TransportPath`] exposes two of them.

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::orthogonal::{OrthElement, OrthSpace, TubePoint};
use nalgebra::DMatrix;

#[derive(Clone, Debug)]
pub struct Majorant {
    pub r: DMatrix<f64>,
    /// F with R = FᵗF; values R[v] = ‖Fv‖² avoid cancellation for large R.
    pub factor: DMatrix<f64>,
    pub base: TubePoint,
}

/// Which decomposition the transport uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportPath {
    /// v₀ ↦ ŷ by two reflections.
    Direct,
    /// v₀ ↦ m ↦ ŷ through a fixed intermediate hyperboloid point.
    Intermediate,
}

impl Majorant {
    fn image(&self, v: &[i64]) -> Vec<f64> {
        let n = v.len();
        let mut out = vec![0.0; n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0 {
                continue;
            }
            let c = vj as f64;
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.factor[(i, j)] * c;
            }
        }
        out
    }

    /// R[ℓ] = ℓᵗRℓ for an integer matrix ℓ with two columns.
    pub fn bracket(&self, ell: &IntMatrix) -> [[f64; 2]; 2] {
        let u = self.image(&ell.col(0));
        let v = self.image(&ell.col(1));
        let uv = dot(&u, &v);
        [[dot(&u, &u), uv], [uv, dot(&v, &v)]]
    }

    /// det R[ℓ] via Gram–Schmidt on Fℓ; most accurate for a reduced basis.
    pub fn det_bracket(&self, ell: &IntMatrix) -> f64 {
        self.det_pair(&ell.col(0), &ell.col(1))
    }

    pub fn det_pair(&self, l: &[i64], m: &[i64]) -> f64 {
        let u = self.image(l);
        let v = self.image(m);
        let uu = dot(&u, &u);
        let c = dot(&u, &v) / uu;
        let w: Vec<f64> = v.iter().zip(&u).map(|(a, b)| a - c * b).collect();
        uu * dot(&w, &w)
    }

    /// R[v] for a single integer vector.
    pub fn value(&self, v: &[i64]) -> f64 {
        let u = self.image(v);
        dot(&u, &u)
    }

    /// R[M] = MᵗRM; the basepoint is carried along unchanged.
    pub fn transformed(&self, m: &DMatrix<f64>) -> Majorant {
        let factor = &self.factor * m;
        let r = factor.transpose() * &factor;
        Majorant { r: (&r + r.transpose()) * 0.5, factor, base: self.base.clone() }
    }
}

/// Residuals of the majorant axioms.
#[derive(Clone, Copy, Debug)]
pub struct MajorantCheck {
    pub symmetry: f64,
    pub positive_definite: bool,
    pub identity: f64,
}

impl MajorantCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.positive_definite && self.symmetry <= tol && self.identity <= tol
    }
}

pub fn check_axioms(space: &OrthSpace, m: &Majorant) -> MajorantCheck {
    let s1_inv = space.s1.clone().try_inverse().expect("S1 invertible");
    let symmetry = (&m.r - m.r.transpose()).amax();
    let positive_definite = m.r.clone().cholesky().is_some();
    let identity = (&m.r * s1_inv * &m.r - &space.s1).amax();
    MajorantCheck { symmetry, positive_definite, identity }
}

/// R_I = diag(1, 1, S, 1, 1).
pub fn base_majorant(space: &OrthSpace) -> Majorant {
    let n = space.n();
    let s = space.lattice.gram();
    let mut r = DMatrix::identity(n + 4, n + 4);
    for i in 0..n {
        for j in 0..n {
            r[(i + 2, j + 2)] = s[(i, j)] as f64;
        }
    }
    let factor = r.clone().cholesky().expect("S positive definite").l().transpose();
    Majorant { r, factor, base: space.base_point() }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact R_I as an integer matrix.
pub fn base_majorant_int(space: &OrthSpace) -> IntMatrix {
    let n = space.n();
    let s = space.lattice.gram();
    let mut r = IntMatrix::identity(n + 4);
    for i in 0..n {
        for j in 0..n {
            r[(i + 2, j + 2)] = s[(i, j)];
        }
    }
    r
}

/// An element δ of the domain-preserving subgroup with δ⟨I⟩ = Z.
pub fn transport_to(space: &OrthSpace, z: &TubePoint) -> Result<OrthElement> {
    transport_with(space, z, TransportPath::Direct)
}

pub fn transport_with(space: &OrthSpace, z: &TubePoint, path: TransportPath) -> Result<OrthElement> {
    space.check_point(z)?;
    let d = space.tube_dim();
    let x = z.re();
    let y = z.im();
    let t = space.q0(&y).sqrt();
    let yh: Vec<f64> = y.iter().map(|v| v / t).collect();
    let mut v0 = vec![0.0; d];
    v0[0] = 1.0;
    v0[d - 1] = 1.0;
    let a = match path {
        TransportPath::Direct => hyperboloid_rotation(space, &v0, &yh, 0)?,
        TransportPath::Intermediate => {
            let mid = intermediate_point(d);
            let first = hyperboloid_rotation(space, &v0, &mid, 1)?;
            hyperboloid_rotation(space, &mid, &yh, 1)? * first
        }
    };
    let delta = space.translation(&x).mul(&space.scale(t)).mul(&space.levi(&a));
    let img = space.act(&delta, &space.base_point()).map_err(|_| Error::TransportFailure(f64::INFINITY))?;
    let res = img.max_diff(z) / (1.0 + z.coords.iter().map(|c| c.norm()).fold(0.0, f64::max));
    if res > 1e-7 {
        return Err(Error::TransportFailure(res));
    }
    Ok(delta)
}

// boost of v0 along (1, 0, …, 0, −1)
fn intermediate_point(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d];
    m[0] = 1.5f64;
    m[d - 1] = 1.0 / 1.5;
    m
}

/// A ∈ SO(S₀) with A p = q for p, q on the upper sheet of Q₀ = 1.
///
/// `choice` selects which projected basis vector serves as the second
/// reflection (0 = largest |φ₀|, 1 = second largest).
fn hyperboloid_rotation(space: &OrthSpace, p: &[f64], q: &[f64], choice: usize) -> Result<DMatrix<f64>> {
    let d = p.len();
    let u: Vec<f64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
    if space.phi0(&u, &u).abs() < 1e-10 {
        let gap = u.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if gap < 1e-12 {
            return Ok(DMatrix::identity(d, d));
        }
        // near-degenerate pair: pass through a third cone point
        let mid = intermediate_point(d);
        let first = hyperboloid_rotation(space, p, &mid, choice)?;
        return Ok(hyperboloid_rotation(space, &mid, q, choice)? * first);
    }
    let su = space.reflection(&u)?;
    let qq = space.phi0(q, q);
    let mut cands: Vec<(f64, Vec<f64>)> = (0..d)
        .map(|k| {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            let c = space.phi0(&e, q) / qq;
            let w: Vec<f64> = e.iter().zip(q).map(|(a, b)| a - c * b).collect();
            (space.phi0(&w, &w).abs(), w)
        })
        .collect();
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    let w = &cands[choice.min(d - 1)].1;
    let sw = space.reflection(w)?;
    Ok(sw * su)
}

/// R_Z = R_I[δ⁻¹].
pub fn majorant_at(space: &OrthSpace, z: &TubePoint) -> Result<Majorant> {
    majorant_with(space, z, TransportPath::Direct)
}

pub fn majorant_with(space: &OrthSpace, z: &TubePoint, path: TransportPath) -> Result<Majorant> {
    let delta = transport_with(space, z, path)?;
    let inv = space.inverse_closed_form(&delta);
    let mut m = base_majorant(space).transformed(&inv.m);
    m.base = z.clone();
    Ok(m)
}

/// Q₀[Im g⟨Z⟩] / Im τ(g⟨Z⟩).
pub fn klingen_quotient(space: &OrthSpace, g: &OrthElement, z: &TubePoint) -> Result<f64> {
    let w = space.act(g, z)?;
    let y = w.im();
    Ok(space.q0(&y) / y[y.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn base_point_transport_is_trivial() {
        let sp = OrthSpace::new(catalog("A2").unwrap());
        let i = sp.base_point();
        let d = transport_to(&sp, &i).unwrap();
        assert!((d.m - DMatrix::identity(6, 6)).amax() < 1e-12);
        let r = majorant_at(&sp, &i).unwrap();
        assert!((r.r - base_majorant(&sp).r).amax() < 1e-12);
    }

    #[test]
    fn doubled_base_point_is_a_scaling() {
        let sp = OrthSpace::new(catalog("A1").unwrap());
        let two_i = TubePoint::new(sp.base_point().coords.iter().map(|c| c * 2.0).collect());
        let d = transport_to(&sp, &two_i).unwrap();
        assert!((d.m - sp.scale(2.0).m).amax() < 1e-12);
    }

    #[test]
    fn axioms_and_two_paths() {
        let sp = OrthSpace::new(catalog("D4").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let z = sp.random_point(&mut rng);
            let a = majorant_with(&sp, &z, TransportPath::Direct).unwrap();
            let b = majorant_with(&sp, &z, TransportPath::Intermediate).unwrap();
            assert!(check_axioms(&sp, &a).passes(1e-8));
            assert!((a.r.clone() - b.r).amax() < 1e-8);
            let da = transport_with(&sp, &z, TransportPath::Direct).unwrap();
            let db = transport_with(&sp, &z, TransportPath::Intermediate).unwrap();
            assert!((da.m - db.m).amax() > 1e-6, "paths should differ as matrices");
        }
    }

    #[test]
    fn quotient_at_base_point() {
        let sp = OrthSpace::new(catalog("E8").unwrap());
        let q = klingen_quotient(&sp, &sp.identity(), &sp.base_point()).unwrap();
        assert!((q - 1.0).abs() < 1e-14);
        assert!((base_majorant(&sp).r.determinant() - 1.0).abs() < 1e-9);
    }
}
