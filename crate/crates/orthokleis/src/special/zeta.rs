use super::gamma;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const TERMS: usize = 24;

// B_{2k}/(2k)! = (−1)^{k+1}·2ζ(2k)/(2π)^{2k}
fn bernoulli_ratios() -> &'static [f64; TERMS] {
    static CELL: OnceLock<[f64; TERMS]> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = [0.0; TERMS];
        for (k, o) in out.iter_mut().enumerate() {
            let m = 2 * (k + 1);
            let z: f64 = (1..200).map(|n| (n as f64).powi(-(m as i32))).sum();
            let z = if m == 2 { PI * PI / 6.0 } else { z };
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *o = sign * 2.0 * z / (2.0 * PI).powi(m as i32);
        }
        out
    })
}

// Euler–Maclaurin, valid for Re s ≥ ½ (and anywhere off s = 1 in principle)
fn zeta_em(s: Complex64) -> Complex64 {
    let n = (20.0 + s.norm()).ceil() as usize;
    let nf = n as f64;
    let mut sum = Complex64::from(0.0);
    for k in (1..n).rev() {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nps = (-s * nf.ln()).exp();
    sum += nps * nf / (s - 1.0) + 0.5 * nps;
    // rising factorial s(s+1)…(s+2k−2) times N^{−s−2k+1}
    let mut fac = s * nps / nf;
    for (k, b) in bernoulli_ratios().iter().enumerate() {
        let term = b * fac;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let j = 2.0 * k as f64;
        fac *= (s + j + 1.0) * (s + j + 2.0) / (nf * nf);
    }
    sum
}

/// Riemann ζ; a pole at s = 1 is reported with its residue.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-14 {
        return Err(Error::PoleAt { at: 1.0, residue: Some(1.0) });
    }
    if s.re >= 0.5 {
        return Ok(zeta_em(s));
    }
    if s.norm() < 1e-7 {
        // reflection degenerates to 0·∞ at the origin
        return Ok(-0.5 - 0.5 * (2.0 * PI).ln() * s);
    }
    // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
    let one_minus = 1.0 - s;
    let f = Complex64::from(2.0).powc(s) * Complex64::from(PI).powc(s - 1.0) * (0.5 * PI * s).sin() * gamma(one_minus);
    Ok(f * zeta_em(one_minus))
}

/// ξ(s) = π^{−s/2}Γ(s/2)ζ(s), with poles at 0 and 1.
pub fn xi(s: Complex64) -> Result<Complex64> {
    if s.norm() < 1e-14 {
        return Err(Error::PoleAt { at: 0.0, residue: Some(-1.0) });
    }
    if (s - 1.0).norm() < 1e-14 {
        return Err(Error::PoleAt { at: 1.0, residue: Some(1.0) });
    }
    // Γ(s/2) has poles where ζ has its trivial zeros; the product is regular there
    let near_trivial = s.re < 0.0 && s.im.abs() < 1e-9 && (s.re / 2.0 - (s.re / 2.0).round()).abs() < 1e-9;
    if near_trivial {
        return xi(1.0 - s);
    }
    Ok(Complex64::from(PI).powc(-0.5 * s) * gamma(0.5 * s) * zeta(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((zeta(Complex64::from(2.0)).unwrap() - PI * PI / 6.0).norm() < 1e-13);
        assert!((zeta(Complex64::from(0.0)).unwrap() + 0.5).norm() < 1e-13);
        assert!((zeta(Complex64::from(-1.0)).unwrap() + 1.0 / 12.0).norm() < 1e-13);
        assert!((zeta(Complex64::from(4.0)).unwrap() - PI.powi(4) / 90.0).norm() < 1e-13);
        // first nontrivial zero
        let z0 = zeta(Complex64::new(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z0.norm() < 1e-10, "{z0}");
        assert!(matches!(zeta(Complex64::from(1.0)), Err(Error::PoleAt { .. })));
        assert!(matches!(xi(Complex64::from(0.0)), Err(Error::PoleAt { .. })));
    }

    #[test]
    fn xi_is_self_dual() {
        for k in 0..20 {
            let s = Complex64::new(-2.3 + 0.37 * k as f64, -20.0 + 2.1 * k as f64);
            let a = xi(s).unwrap();
            let b = xi(1.0 - s).unwrap();
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300), "{s}: {a} vs {b}");
        }
    }
}
