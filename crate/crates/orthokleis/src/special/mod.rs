//! Gamma, zeta and completed zeta, plus the gamma factors and matrix
//! integrals used by the completed series.

pub mod assembly;
pub mod cubature;
mod zeta;

pub use zeta::{xi, zeta};

use num_complex::Complex64;
use std::f64::consts::PI;

// Lanczos, g = 7, n = 9
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(z) on the principal branch away from the poles.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1 − z) = π / sin(πz)
        let s = (Complex64::from(PI) * z).sin();
        return Complex64::from(PI).ln() - s.ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (Complex64::from(PI) * z).sin();
        return Complex64::from(PI) / (s * gamma(1.0 - z));
    }
    ln_gamma(z).exp()
}

pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::from(x)).re
}

/// Γ₂(s) = Γ(s)Γ(s − ½).
pub fn gamma2(s: Complex64) -> Complex64 {
    gamma(s) * gamma(s - 0.5)
}

/// φ₂(t) = t(t − ½).
pub fn phi2(t: Complex64) -> Complex64 {
    t * (t - 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        let close = |a: Complex64, b: f64| (a - b).norm() <= 1e-13 * b.abs().max(1.0);
        assert!(close(gamma(Complex64::from(5.0)), 24.0));
        assert!(close(gamma(Complex64::from(0.5)), PI.sqrt()));
        assert!(close(gamma(Complex64::from(-0.5)), -2.0 * PI.sqrt()));
        let z = Complex64::new(0.3, 2.1);
        let rec = gamma(z + 1.0) / (z * gamma(z));
        assert!((rec - 1.0).norm() < 1e-13);
    }
}
