//! Truncated theta series θ(Z, W) = Σ_ℓ e^{πi tr(S₁[ℓ]X) − π tr(R_W[ℓ]Y)}
//! over all ℓ ∈ Mat_{n+4,2}(ℤ), and Θ = det(Y)^{(n+2)/2}·θ.
//!
//! ℓ = (l, m) is flattened to v = (l; m), so tr(R[ℓ]Y) = (Y⊗R)[v] and
//! tr(S₁[ℓ]X) = (X⊗S₁)[v]. The sum runs over tr(R[ℓ]Y) ≤ B.

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::lattice::enumerate::{Ellipsoid, Incremental, Visitor};
use crate::majorant::{majorant_at, Majorant};
use crate::orthogonal::{OrthSpace, TubePoint};
use crate::siegel::SiegelPoint;
use crate::special::ln_gamma_real;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct ThetaQuery {
    pub z: SiegelPoint,
    pub w: TubePoint,
    pub b: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ThetaOptions {
    /// Cap on the expected number of enumerated points.
    pub budget: u64,
    /// Smallest admissible eigenvalue of Im Z.
    pub min_eigen: f64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions { budget: 2_000_000_000, min_eigen: 1e-3 }
    }
}

/// Bound on the mass of the omitted terms, with its ingredients.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailBound {
    pub bound: f64,
    /// Chernoff factor e^{−πB + D/2}(2πB/D)^{D/2}.
    pub chernoff: f64,
    /// A priori bound on the full mass Σ e^{−πQ}.
    pub mass: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: Complex64,
    /// Number of ℓ in the truncated sum, both signs and ℓ = 0 included.
    pub terms: u64,
    pub abs_sum: f64,
    pub tail: TailBound,
}

impl ThetaValue {
    pub fn to_json(&self, b: f64) -> serde_json::Value {
        serde_json::json!({
            "terms": self.terms,
            "B": b,
            "value": [self.value.re, self.value.im],
            "tail_bound": self.tail.bound,
        })
    }
}

/// ϑ(x) = Σ_{k∈ℤ} e^{−πxk²}.
pub fn jacobi_theta3(x: f64) -> f64 {
    if x < 1.0 {
        return jacobi_theta3(1.0 / x) / x.sqrt();
    }
    let mut s = 1.0;
    for k in 1.. {
        let t = 2.0 * (-PI * x * (k * k) as f64).exp();
        s += t;
        if t < 1e-18 * s {
            break;
        }
    }
    s
}

fn chernoff(b: f64, dim: usize) -> f64 {
    let d = dim as f64;
    if b <= d / (2.0 * PI) {
        return 1.0;
    }
    (-PI * b + 0.5 * d + 0.5 * d * (2.0 * PI * b / d).ln()).exp()
}

/// Σ_{Q(v) > B} e^{−πQ(v)} for Q = Y⊗R.
///
/// For λ ∈ (0, 1], Σ_{Q>B} e^{−πQ} ≤ e^{−π(1−λ)B} Σ e^{−πλQ} ≤ e^{−π(1−λ)B} λ^{−D/2} M
/// by Poisson summation, where M is the full mass; λ = D/(2πB) is optimal.
/// M is bounded a priori by eigenvalue comparison, and a posteriori by
/// M ≤ S_B/(1 − c) where S_B is the truncated mass.
pub fn tail_bound(b: f64, y: &SiegelPoint, r: &Majorant) -> TailBound {
    tail_bound_with_sum(b, y, r, None)
}

pub fn tail_bound_with_sum(b: f64, y: &SiegelPoint, r: &Majorant, truncated_mass: Option<f64>) -> TailBound {
    let eig = r.r.clone().symmetric_eigen().eigenvalues;
    let rmin = eig.min();
    let rmax = eig.max();
    let yv = y.y();
    let mean = 0.5 * (yv[0] + yv[1]);
    let rad = (0.25 * (yv[0] - yv[1]).powi(2) + yv[2] * yv[2]).sqrt();
    let (ymin, ymax) = (mean - rad, mean + rad);
    let n = r.r.nrows();
    let dim = 2 * n;
    let lambda_min = ymin * rmin;
    let lambda_max = ymax * rmax;
    let det_r: f64 = eig.iter().product();
    let log_det_q = n as f64 * y.det_y().ln() + 2.0 * det_r.ln();
    let direct = dim as f64 * jacobi_theta3(lambda_min).ln();
    let dual = -0.5 * log_det_q + dim as f64 * jacobi_theta3(1.0 / lambda_max).ln();
    let mass = direct.min(dual).exp();
    let c = chernoff(b, dim);
    let mut bound = c * mass;
    if let Some(sb) = truncated_mass {
        if c < 1.0 {
            bound = bound.min(c * sb / (1.0 - c));
        }
    }
    TailBound { bound, chernoff: c, mass, lambda_min, lambda_max, dim }
}

fn kron(y: [f64; 3], m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let (a, b, c) = (y[0], y[1], y[2]);
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let f = match (i < n, j < n) {
            (true, true) => a,
            (false, false) => b,
            _ => c,
        };
        f * m[(i % n, j % n)]
    })
}

struct Accumulate {
    phase: Incremental<f64>,
    sum: Complex64,
    abs: f64,
    count: u64,
}

impl Visitor for Accumulate {
    fn fix(&mut self, level: usize, x: &[i64]) {
        self.phase.fix(level, x);
    }

    fn leaf(&mut self, _x: &[i64], norm: f64) -> bool {
        let mag = (-PI * norm).exp();
        let (s, c) = (PI * self.phase.value()).sin_cos();
        self.sum += Complex64::new(mag * c, mag * s);
        self.abs += mag;
        self.count += 1;
        true
    }
}

/// Expected number of points with Q[v] ≤ B, by volume.
pub fn expected_points(q: &DMatrix<f64>, b: f64) -> f64 {
    let d = q.nrows() as f64;
    let log_ball = 0.5 * d * PI.ln() - ln_gamma_real(0.5 * d + 1.0);
    (log_ball + 0.5 * d * b.ln() - 0.5 * q.determinant().ln()).exp()
}

/// θ with an explicitly supplied majorant.
pub fn theta_with_majorant(space: &OrthSpace, r: &Majorant, z: &SiegelPoint, b: f64, opts: ThetaOptions) -> Result<ThetaValue> {
    if z.y_min_eigen() < opts.min_eigen {
        return Err(Error::Invalid(format!("Im Z has eigenvalue below {}", opts.min_eigen)));
    }
    if b.is_nan() || b < 0.0 {
        return Err(Error::Invalid(format!("truncation radius must be nonnegative, got {b}")));
    }
    let q = kron(z.y(), &r.r);
    let q = (&q + q.transpose()) * 0.5;
    let expected = expected_points(&q, b);
    if expected > opts.budget as f64 {
        return Err(Error::BudgetExceeded { needed: expected as u64, budget: opts.budget });
    }
    let e = Ellipsoid::new(&q);
    let p = kron(z.x(), &space.s1);
    let ub = e.basis.to_f64();
    let pred = ub.transpose() * p * &ub;
    let d = q.nrows();
    let flat = (0..d * d).map(|k| pred[(k / d, k % d)]).collect();
    let mut acc = Accumulate { phase: Incremental::new(d, flat), sum: Complex64::from(0.0), abs: 0.0, count: 0 };
    e.run(b, true, false, &mut acc);
    let value = 1.0 + 2.0 * acc.sum;
    let abs_sum = 1.0 + 2.0 * acc.abs;
    let tail = tail_bound_with_sum(b, z, r, Some(abs_sum));
    Ok(ThetaValue { value, terms: 1 + 2 * acc.count, abs_sum, tail })
}

pub fn theta_truncated(space: &OrthSpace, q: &ThetaQuery, opts: ThetaOptions) -> Result<ThetaValue> {
    let r = majorant_at(space, &q.w)?;
    theta_with_majorant(space, &r, &q.z, q.b, opts)
}

/// Θ = det(Y)^{(n+2)/2}·θ; the tail bound is scaled by the same factor.
pub fn big_theta(space: &OrthSpace, q: &ThetaQuery, opts: ThetaOptions) -> Result<ThetaValue> {
    let t = theta_truncated(space, q, opts)?;
    Ok(scale_to_big(space, &q.z, t))
}

pub fn scale_to_big(space: &OrthSpace, z: &SiegelPoint, mut t: ThetaValue) -> ThetaValue {
    let f = z.det_y().powf(0.5 * (space.n() as f64 + 2.0));
    t.value *= f;
    t.abs_sum *= f;
    t.tail.bound *= f;
    t
}

/// The single term θ_ℓ(Z, W), evaluated directly.
pub fn theta_term(space: &OrthSpace, r: &Majorant, ell: &IntMatrix, z: &SiegelPoint) -> Complex64 {
    let a = space.forms.s1.bracket(ell);
    let b = r.bracket(ell);
    let [x1, x2, x3] = z.x();
    let [y1, y2, y3] = z.y();
    let tr_ax = x1 * a[(0, 0)] as f64 + x2 * a[(1, 1)] as f64 + 2.0 * x3 * a[(0, 1)] as f64;
    let tr_by = y1 * b[0][0] + y2 * b[1][1] + 2.0 * y3 * b[0][1];
    Complex64::from_polar((-PI * tr_by).exp(), PI * tr_ax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use crate::majorant::base_majorant;

    #[test]
    fn theta3_values() {
        // ϑ(1) = π^{1/4}/Γ(3/4)
        let exact = PI.powf(0.25) / crate::special::gamma(Complex64::from(0.75)).re;
        assert!((jacobi_theta3(1.0) - exact).abs() < 1e-14);
        assert!((jacobi_theta3(0.25) - 2.0 * jacobi_theta3(4.0)).abs() < 1e-14);
    }

    #[test]
    fn tail_bound_is_monotone() {
        let sp = OrthSpace::new(catalog("A1").unwrap());
        let r = base_majorant(&sp);
        let z = SiegelPoint::scalar(1.0);
        let mut last = f64::INFINITY;
        for b in [2.0, 4.0, 8.0, 16.0, 32.0] {
            let t = tail_bound(b, &z, &r).bound;
            assert!(t < last);
            last = t;
        }
        let z2 = SiegelPoint::scalar(2.0);
        assert!(tail_bound(8.0, &z2, &r).bound < tail_bound(8.0, &z, &r).bound);
    }

    #[test]
    fn zero_radius_gives_one_and_tail_dominates() {
        let sp = OrthSpace::new(catalog("A1").unwrap());
        let r = base_majorant(&sp);
        let z = SiegelPoint::new(Complex64::new(0.2, 1.1), Complex64::new(-0.1, 1.3), Complex64::new(0.05, 0.1)).unwrap();
        let t0 = theta_with_majorant(&sp, &r, &z, 0.0, ThetaOptions::default()).unwrap();
        assert_eq!(t0.value, Complex64::from(1.0));
        let a = theta_with_majorant(&sp, &r, &z, 3.0, ThetaOptions::default()).unwrap();
        let b = theta_with_majorant(&sp, &r, &z, 6.0, ThetaOptions::default()).unwrap();
        assert!((a.value - b.value).norm() <= a.tail.bound);
    }

    #[test]
    fn real_at_zero_x() {
        let sp = OrthSpace::new(catalog("A2").unwrap());
        let r = base_majorant(&sp);
        let z = SiegelPoint::new(Complex64::new(0.0, 1.1), Complex64::new(0.0, 1.3), Complex64::new(0.0, 0.1)).unwrap();
        let t = theta_with_majorant(&sp, &r, &z, 4.0, ThetaOptions::default()).unwrap();
        assert!(t.value.im.abs() < 1e-12);
    }
}
