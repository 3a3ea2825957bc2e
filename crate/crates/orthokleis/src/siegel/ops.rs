//! Differential operators on exponential polynomials over ℍ₂.
//!
//! (∂_Z)ᵢⱼ = ½(1 + δᵢⱼ) ∂/∂Zᵢⱼ, so det ∂_Z = ∂₁∂₂ − ¼∂₃² in the coordinates
//! z₁ = Z₁₁, z₂ = Z₂₂, z₃ = Z₁₂, and likewise for det ∂_Y.

use super::exppoly::{q, qi, q_from_f64, Coeff, ExpPoly, GaussQ, Q};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::majorant::Majorant;
use crate::orthogonal::OrthSpace;
use num_traits::{One, Zero};

pub fn d_dz(f: &ExpPoly, j: usize) -> ExpPoly {
    f.d_dz(j)
}

/// det ∂_Z.
pub fn det_dz(f: &ExpPoly) -> ExpPoly {
    let a = f.d_dz(1).d_dz(0);
    let b = f.d_dz(2).d_dz(2).scale_q(&q(1, 4));
    &a - &b
}

/// det ∂_Y.
pub fn det_dy(f: &ExpPoly) -> ExpPoly {
    let a = f.d_dy(1).d_dy(0);
    let b = f.d_dy(2).d_dy(2).scale_q(&q(1, 4));
    &a - &b
}

/// δ_k = (det Y)^{−k+1/2} det ∂_Z (det Y)^{k−1/2}.
pub fn maass_delta(f: &ExpPoly, k: &Q) -> ExpPoly {
    let e = k - q(1, 2);
    det_dz(&f.mul_det(&e, &Q::zero())).mul_det(&-e, &Q::zero())
}

/// δ_k^{(r)} = δ_{k+2r−2} ∘ … ∘ δ_{k+2} ∘ δ_k.
pub fn shimura_power(f: &ExpPoly, k: &Q, r: u32) -> ExpPoly {
    let mut g = f.clone();
    for i in 0..r {
        g = maass_delta(&g, &(k + qi(2 * i as i64)));
    }
    g
}

/// σ = i Σ y_j ∂/∂z_j.
pub fn sigma_op(f: &ExpPoly) -> ExpPoly {
    let mut out = ExpPoly::zero();
    for j in 0..3 {
        out = &out + &f.d_dz(j).mul_y(j);
    }
    out.scale_g(&GaussQ::i())
}

/// D_l = (det Y)^l det ∂_Y (det Y)^{1−l} (degree two).
pub fn d_lm(f: &ExpPoly, l: &Q) -> ExpPoly {
    det_dy(&f.mul_det(&(Q::one() - l), &Q::zero())).mul_det(l, &Q::zero())
}

/// R₀* = (det Y)^{2−r} det ∂_Y (det Y)^{1+2r} det ∂_Y, defined on X-independent input.
pub fn r0_star(f: &ExpPoly, r: u32) -> Result<ExpPoly> {
    if !f.is_x_independent() {
        return Err(Error::XDependentInput);
    }
    let r = r as i64;
    let inner = det_dy(f).mul_det(&qi(1 + 2 * r), &Q::zero());
    Ok(det_dy(&inner).mul_det(&qi(2 - r), &Q::zero()))
}

/// R₀ = (det Y)^{−(1+r)} R₀*.
pub fn r0(f: &ExpPoly, r: u32) -> Result<ExpPoly> {
    Ok(r0_star(f, r)?.mul_det(&qi(-1 - r as i64), &Q::zero()))
}

/// exp(πi tr(AX) − π tr(BY)) from 2×2 frequency matrices.
pub fn exp_from_brackets(a: [[Q; 2]; 2], b: [[Q; 2]; 2]) -> ExpPoly {
    let [[a11, a12], [_, a22]] = a;
    let [[b11, b12], [_, b22]] = b;
    ExpPoly::exponential([a11, a22, a12], [b11, b22, b12])
}

/// θ_ℓ = exp(πi tr(S₁[ℓ]X) − π tr(R[ℓ]Y)) with R[ℓ] read as exact dyadic rationals.
pub fn theta_term_symbol(space: &OrthSpace, r: &Majorant, ell: &IntMatrix) -> ExpPoly {
    let a = int_bracket(&space.forms.s1.bracket(ell));
    let rb = r.bracket(ell);
    let b = [
        [q_from_f64(rb[0][0]), q_from_f64(rb[0][1])],
        [q_from_f64(rb[1][0]), q_from_f64(rb[1][1])],
    ];
    exp_from_brackets(a, b)
}

/// θ_ℓ for an integral majorant such as R_I.
pub fn theta_term_symbol_exact(space: &OrthSpace, r: &IntMatrix, ell: &IntMatrix) -> ExpPoly {
    exp_from_brackets(int_bracket(&space.forms.s1.bracket(ell)), int_bracket(&r.bracket(ell)))
}

fn int_bracket(m: &IntMatrix) -> [[Q; 2]; 2] {
    [[qi(m[(0, 0)]), qi(m[(0, 1)])], [qi(m[(1, 0)]), qi(m[(1, 1)])]]
}

/// The constant −π²/4 · det B that det ∂_Z produces on an isotropic θ_ℓ.
pub fn isotropic_det_constant(b: &[[Q; 2]; 2]) -> Coeff {
    let det = &b[0][0] * &b[1][1] - &b[0][1] * &b[1][0];
    Coeff::pi_pow(2).scale_q(&(det * q(-1, 4)))
}
