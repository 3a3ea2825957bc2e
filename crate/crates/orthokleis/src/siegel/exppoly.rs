//! Exact exponential polynomials on ℍ₂:
//!
//!   Σ c · (det Y)^p · y₁^a y₂^b y₃^c · exp(πi tr(AX) − π tr(BY))
//!
//! with c ∈ ℚ(i)[π, s] (π and the complex variable s kept formal), p affine
//! in s with rational coefficients, and rational symmetric frequencies A, B.
//! Products y₁y₂ are rewritten as det Y + y₃², which makes the representation
//! unique: monomials are y₁^a y₃^c or y₂^b y₃^c.

use crate::siegel::SiegelPoint;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exact dyadic rational equal to a finite float.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerator/denominator: divide in floating point after scaling
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Gaussian rational re + i·im.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }
    pub fn real(re: Q) -> Self {
        GaussQ { re, im: Q::zero() }
    }
    pub fn i() -> Self {
        GaussQ { re: Q::zero(), im: Q::one() }
    }
    pub fn one() -> Self {
        Self::real(Q::one())
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

impl Add for &GaussQ {
    type Output = GaussQ;
    fn add(self, o: &GaussQ) -> GaussQ {
        GaussQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussQ {
    type Output = GaussQ;
    fn sub(self, o: &GaussQ) -> GaussQ {
        GaussQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussQ {
    type Output = GaussQ;
    fn mul(self, o: &GaussQ) -> GaussQ {
        GaussQ { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -&self.re, im: -&self.im }
    }
}

/// Polynomial in (π, s) with Gaussian rational coefficients, keyed by (π-degree, s-degree).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coeff {
    pub terms: BTreeMap<(u32, u32), GaussQ>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn constant(c: GaussQ) -> Self {
        let mut out = Coeff::zero();
        out.add_monomial(0, 0, c);
        out
    }

    pub fn rational(x: Q) -> Self {
        Self::constant(GaussQ::real(x))
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    /// π^k.
    pub fn pi_pow(k: u32) -> Self {
        let mut out = Coeff::zero();
        out.add_monomial(k, 0, GaussQ::one());
        out
    }

    /// a + b·s.
    pub fn affine_s(a: &Q, b: &Q) -> Self {
        let mut out = Coeff::zero();
        out.add_monomial(0, 0, GaussQ::real(a.clone()));
        out.add_monomial(0, 1, GaussQ::real(b.clone()));
        out
    }

    pub fn add_monomial(&mut self, pi: u32, s: u32, c: GaussQ) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((pi, s)).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&(pi, s));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &GaussQ) -> Coeff {
        let mut out = Coeff::zero();
        for (k, v) in &self.terms {
            out.add_monomial(k.0, k.1, v * c);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> Coeff {
        self.scale(&GaussQ::real(c.clone()))
    }

    pub fn times_pi(&self, k: u32) -> Coeff {
        let mut out = Coeff::zero();
        for (key, v) in &self.terms {
            out.add_monomial(key.0 + k, key.1, v.clone());
        }
        out
    }

    pub fn eval(&self, pi: f64, s: Complex64) -> Complex64 {
        self.terms.iter().map(|(&(a, b), c)| c.to_c64() * pi.powi(a as i32) * s.powu(b)).sum()
    }

    /// Coefficient of π^k as a polynomial in s (index = s-degree).
    pub fn pi_component(&self, k: u32) -> BTreeMap<u32, GaussQ> {
        self.terms.iter().filter(|(key, _)| key.0 == k).map(|(key, v)| (key.1, v.clone())).collect()
    }

    pub fn max_pi(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_monomial(k.0, k.1, v.clone());
        }
        out
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_monomial(k.0, k.1, -v);
        }
        out
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_monomial(a.0 + b.0, a.1 + b.1, x * y);
            }
        }
        out
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(p, s), c)| {
                let mut t = format!("({}{}{}i)", c.re, if c.im.is_negative() { "" } else { "+" }, c.im);
                if p > 0 {
                    t += &format!("·π^{p}");
                }
                if s > 0 {
                    t += &format!("·s^{s}");
                }
                t
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Everything except the coefficient: (det Y)^p y^mono exp(πi tr(AX) − π tr(BY)).
/// Frequencies are stored as (a₁₁, a₂₂, a₁₂).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    /// p = p.0 + p.1·s.
    pub p: (Q, Q),
    pub mono: [u32; 3],
    pub a: [Q; 3],
    pub b: [Q; 3],
}

impl Shape {
    pub fn plain() -> Self {
        Shape { p: (Q::zero(), Q::zero()), mono: [0; 3], a: zero3(), b: zero3() }
    }
}

fn zero3() -> [Q; 3] {
    [Q::zero(), Q::zero(), Q::zero()]
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExpPoly {
    pub terms: BTreeMap<Shape, Coeff>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: Coeff) -> Self {
        let mut f = ExpPoly::zero();
        f.add_term(Shape::plain(), c);
        f
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    /// (det Y)^{p₀ + p₁s}.
    pub fn det_power(p0: Q, p1: Q) -> Self {
        let mut f = ExpPoly::zero();
        f.add_term(Shape { p: (p0, p1), ..Shape::plain() }, Coeff::one());
        f
    }

    /// Single exponential exp(πi tr(AX) − π tr(BY)) with unit coefficient.
    pub fn exponential(a: [Q; 3], b: [Q; 3]) -> Self {
        let mut f = ExpPoly::zero();
        f.add_term(Shape { a, b, ..Shape::plain() }, Coeff::one());
        f
    }

    /// y₁^a y₂^b y₃^c.
    pub fn monomial(mono: [u32; 3]) -> Self {
        let mut f = ExpPoly::zero();
        f.add_term(Shape { mono, ..Shape::plain() }, Coeff::one());
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds c·shape, reducing y₁y₂ = det Y + y₃² first.
    pub fn add_term(&mut self, shape: Shape, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let [a, b, e] = shape.mono;
        if a > 0 && b > 0 {
            let mut lower = shape.clone();
            lower.mono = [a - 1, b - 1, e];
            let mut with_det = lower.clone();
            with_det.p.0 += Q::one();
            let mut with_y3 = lower;
            with_y3.mono[2] += 2;
            self.add_term(with_det, c.clone());
            self.add_term(with_y3, c);
            return;
        }
        match self.terms.get_mut(&shape) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&shape);
                }
            }
            None => {
                self.terms.insert(shape, c);
            }
        }
    }

    /// Rebuilds the normal form from scratch; a no-op on values built through this API.
    pub fn canonical(&self) -> Self {
        let mut out = ExpPoly::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = ExpPoly::zero();
        for (s, v) in &self.terms {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    pub fn scale_g(&self, c: &GaussQ) -> Self {
        self.scale(&Coeff::constant(c.clone()))
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale_g(&GaussQ::real(c.clone()))
    }

    /// Product of two exponential polynomials.
    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (s, c) in &self.terms {
            for (t, d) in &other.terms {
                let shape = Shape {
                    p: (&s.p.0 + &t.p.0, &s.p.1 + &t.p.1),
                    mono: [s.mono[0] + t.mono[0], s.mono[1] + t.mono[1], s.mono[2] + t.mono[2]],
                    a: [&s.a[0] + &t.a[0], &s.a[1] + &t.a[1], &s.a[2] + &t.a[2]],
                    b: [&s.b[0] + &t.b[0], &s.b[1] + &t.b[1], &s.b[2] + &t.b[2]],
                };
                out.add_term(shape, c * d);
            }
        }
        out
    }

    /// Multiplication by (det Y)^{e₀ + e₁s}.
    pub fn mul_det(&self, e0: &Q, e1: &Q) -> Self {
        let mut out = ExpPoly::zero();
        for (s, c) in &self.terms {
            let mut t = s.clone();
            t.p.0 += e0;
            t.p.1 += e1;
            out.add_term(t, c.clone());
        }
        out
    }

    /// Multiplication by y_j (j = 0, 1, 2 for y₁, y₂, y₃).
    pub fn mul_y(&self, j: usize) -> Self {
        let mut out = ExpPoly::zero();
        for (s, c) in &self.terms {
            let mut t = s.clone();
            t.mono[j] += 1;
            out.add_term(t, c.clone());
        }
        out
    }

    /// ∂/∂x_j.
    pub fn d_dx(&self, j: usize) -> Self {
        let mut out = ExpPoly::zero();
        for (s, c) in &self.terms {
            let f = freq(&s.a, j);
            if f.is_zero() {
                continue;
            }
            out.add_term(s.clone(), c.times_pi(1).scale(&GaussQ::new(Q::zero(), f)));
        }
        out
    }

    /// ∂/∂y_j.
    pub fn d_dy(&self, j: usize) -> Self {
        let mut out = ExpPoly::zero();
        for (s, c) in &self.terms {
            // (det Y)^p: p (det Y)^{p−1} ∂(det Y)/∂y_j with ∂/∂y₁ = y₂, ∂/∂y₂ = y₁, ∂/∂y₃ = −2y₃
            if !(s.p.0.is_zero() && s.p.1.is_zero()) {
                let mut t = s.clone();
                t.p.0 -= Q::one();
                let mut k = c * &Coeff::affine_s(&s.p.0, &s.p.1);
                match j {
                    0 => t.mono[1] += 1,
                    1 => t.mono[0] += 1,
                    _ => {
                        t.mono[2] += 1;
                        k = k.scale_q(&qi(-2));
                    }
                }
                out.add_term(t, k);
            }
            if s.mono[j] > 0 {
                let mut t = s.clone();
                t.mono[j] -= 1;
                out.add_term(t, c.scale_q(&qi(s.mono[j] as i64)));
            }
            let f = freq(&s.b, j);
            if !f.is_zero() {
                out.add_term(s.clone(), c.times_pi(1).scale_q(&-f));
            }
        }
        out
    }

    /// ∂/∂z_j = (∂/∂x_j − i ∂/∂y_j)/2.
    pub fn d_dz(&self, j: usize) -> Self {
        let dx = self.d_dx(j);
        let dy = self.d_dy(j).scale_g(&GaussQ::new(Q::zero(), qi(-1)));
        (&dx + &dy).scale_q(&q(1, 2))
    }

    /// Σ c·(value of the term) at a point, with π and s substituted.
    pub fn eval(&self, z: &SiegelPoint, s: Complex64) -> Complex64 {
        let [x1, x2, x3] = z.x();
        let [y1, y2, y3] = z.y();
        let det = y1 * y2 - y3 * y3;
        let ld = det.ln();
        let pi = std::f64::consts::PI;
        let mut out = Complex64::from(0.0);
        for (sh, c) in &self.terms {
            let p = Complex64::from(q_to_f64(&sh.p.0)) + s * q_to_f64(&sh.p.1);
            let a: Vec<f64> = sh.a.iter().map(q_to_f64).collect();
            let b: Vec<f64> = sh.b.iter().map(q_to_f64).collect();
            let tr_ax = a[0] * x1 + a[1] * x2 + 2.0 * a[2] * x3;
            let tr_by = b[0] * y1 + b[1] * y2 + 2.0 * b[2] * y3;
            let mono = y1.powi(sh.mono[0] as i32) * y2.powi(sh.mono[1] as i32) * y3.powi(sh.mono[2] as i32);
            let e = Complex64::new(-pi * tr_by, pi * tr_ax) + p * ld;
            out += c.eval(pi, s) * mono * e.exp();
        }
        out
    }

    /// Terms with A = 0: the integral over X ∈ Sym₂(ℝ/ℤ) when all frequencies are integral.
    pub fn x_integral(&self) -> Self {
        let mut out = ExpPoly::zero();
        for (s, c) in &self.terms {
            if s.a.iter().all(|v| v.is_zero()) {
                out.add_term(s.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_x_independent(&self) -> bool {
        self.terms.keys().all(|s| s.a.iter().all(|v| v.is_zero()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(s, c)| {
                let coeff: Vec<serde_json::Value> = c
                    .terms
                    .iter()
                    .map(|(&(pi, sd), v)| serde_json::json!({"pi": pi, "s": sd, "re": v.re.to_string(), "im": v.im.to_string()}))
                    .collect();
                serde_json::json!({
                    "coeff_pi_poly": coeff,
                    "p": [s.p.0.to_string(), s.p.1.to_string()],
                    "mono": s.mono,
                    "A": s.a.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "B": s.b.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

// d/dx_j tr(FX) for F stored as (f₁₁, f₂₂, f₁₂)
fn freq(f: &[Q; 3], j: usize) -> Q {
    if j == 2 {
        &f[2] * qi(2)
    } else {
        f[j].clone()
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, o: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, o: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(s.clone(), c.scale_q(&qi(-1)));
        }
        out
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]·D^({}+{}s)·y^{:?}", s.p.0, s.p.1, s.mono)?;
            if s.a.iter().any(|v| !v.is_zero()) || s.b.iter().any(|v| !v.is_zero()) {
                write!(f, "·e(A={:?}, B={:?})", s.a.iter().map(|v| v.to_string()).collect::<Vec<_>>(), s.b.iter().map(|v| v.to_string()).collect::<Vec<_>>())?;
            }
        }
        Ok(())
    }
}
