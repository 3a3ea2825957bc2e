//! The one-variable model: functions Σ c_t y^t on the upper half plane.
//!
//! Raising δ_k = k/(2iy) + ∂/∂z acts by δ_k y^t = −(i/2)(t + k) y^{t−1}, and
//! R(1, l) = 4y²∂∂̄ − (l − 2)(l − 1) with l = 2 + n/4 on y-only functions.

use super::exppoly::{q, qi, GaussQ, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OneDimPoly {
    /// exponent t ↦ coefficient of y^t.
    pub terms: BTreeMap<Q, GaussQ>,
}

impl OneDimPoly {
    pub fn power(t: Q) -> Self {
        let mut f = OneDimPoly::default();
        f.add(t, GaussQ::one());
        f
    }

    pub fn add(&mut self, t: Q, c: GaussQ) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// d/dy.
    fn d_dy(&self) -> Self {
        let mut out = OneDimPoly::default();
        for (t, c) in &self.terms {
            out.add(t - Q::one(), c * &GaussQ::real(t.clone()));
        }
        out
    }

    fn scale(&self, c: &GaussQ) -> Self {
        let mut out = OneDimPoly::default();
        for (t, v) in &self.terms {
            out.add(t.clone(), v * c);
        }
        out
    }

    fn shift(&self, k: i64) -> Self {
        let mut out = OneDimPoly::default();
        for (t, v) in &self.terms {
            out.add(t + qi(k), v.clone());
        }
        out
    }

    /// ∂/∂z = −(i/2) d/dy on functions of y alone.
    pub fn d_dz(&self) -> Self {
        self.d_dy().scale(&GaussQ::new(Q::zero(), q(-1, 2)))
    }

    /// ∂/∂z̄ = (i/2) d/dy.
    pub fn d_dzbar(&self) -> Self {
        self.d_dy().scale(&GaussQ::new(Q::zero(), q(1, 2)))
    }

    /// δ_k = k/(2iy) + ∂/∂z.
    pub fn delta(&self, k: &Q) -> Self {
        let mut out = self.d_dz();
        let lead = self.shift(-1).scale(&GaussQ::new(Q::zero(), -k / qi(2)));
        for (t, c) in lead.terms {
            out.add(t, c);
        }
        out
    }

    /// δ_{k+2r−2} ∘ … ∘ δ_k.
    pub fn delta_power(&self, k: &Q, r: u32) -> Self {
        let mut g = self.clone();
        for i in 0..r {
            g = g.delta(&(k + qi(2 * i as i64)));
        }
        g
    }

    /// 4y²∂∂̄ − c.
    pub fn casimir(&self, c: &Q) -> Self {
        let mut out = self.d_dzbar().d_dz().scale(&GaussQ::real(qi(4))).shift(2);
        for (t, v) in &self.terms {
            out.add(t.clone(), v * &GaussQ::real(-c));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct AnnihilationReport {
    pub n: u32,
    pub r: u32,
    /// δ_{−n/2}^{(n/4)} y^{(n+2)/2}.
    pub image: OneDimPoly,
    /// (−i/2)^r r!, the predicted leading constant.
    pub predicted_constant: GaussQ,
    pub annihilated: bool,
    /// Same pipeline started from y^{(n+2)/2 + 1}; must not be annihilated.
    pub control_annihilated: bool,
}

impl AnnihilationReport {
    pub fn passes(&self) -> bool {
        let expected_exp = q(self.n as i64 + 2, 2) - qi(self.r as i64);
        let image_ok = self.image.terms.len() == 1 && self.image.terms.get(&expected_exp) == Some(&self.predicted_constant);
        image_ok && self.annihilated && !self.control_annihilated
    }
}

/// R(1, 2 + n/4) kills δ_{−n/2}^{(n/4)} y^{(n+2)/2}; n must be divisible by four.
pub fn one_dim_annihilation(n: u32) -> AnnihilationReport {
    assert!(n % 4 == 0 && n > 0, "n must be a positive multiple of 4");
    let r = n / 4;
    let k = q(-(n as i64), 2);
    let start = q(n as i64 + 2, 2);
    let c = qi(r as i64) * qi(r as i64 + 1);
    let image = OneDimPoly::power(start.clone()).delta_power(&k, r);
    let control = OneDimPoly::power(start + Q::one()).delta_power(&k, r);
    let mut constant = GaussQ::one();
    for j in 1..=r {
        constant = &constant * &GaussQ::new(Q::zero(), q(-(j as i64), 2));
    }
    AnnihilationReport {
        n,
        r,
        annihilated: image.casimir(&c).is_zero(),
        control_annihilated: control.casimir(&c).is_zero(),
        image,
        predicted_constant: constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raising_on_powers() {
        // δ_k y^t = −(i/2)(t + k) y^{t−1}
        let f = OneDimPoly::power(q(7, 2)).delta(&qi(-3));
        let mut want = OneDimPoly::default();
        want.add(q(5, 2), GaussQ::new(Q::zero(), q(-1, 4)));
        assert_eq!(f, want);
    }

    #[test]
    fn annihilation_four_and_eight() {
        for n in [4, 8, 12] {
            let rep = one_dim_annihilation(n);
            assert!(rep.passes(), "n = {n}: {rep:?}");
        }
    }

    #[test]
    fn casimir_eigenvalue() {
        // 4y²∂∂̄ y^a = a(a − 1) y^a
        let f = OneDimPoly::power(q(5, 2)).casimir(&Q::zero());
        assert_eq!(f.terms.get(&q(5, 2)), Some(&GaussQ::real(q(15, 4))));
    }
}
