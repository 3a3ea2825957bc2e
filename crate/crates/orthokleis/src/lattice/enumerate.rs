//! Fincke–Pohst enumeration of lattice points in an ellipsoid, with LLL
//! preprocessing of the Gram matrix.
//!
//! Callers receive coordinates in the reduced basis together with the
//! unimodular change of basis, so they can keep incremental state (phases,
//! exact integer forms) that is updated level by level instead of being
//! recomputed at every leaf.

use crate::intmat::IntMatrix;
use nalgebra::DMatrix;

/// Receives the enumeration tree. Levels are fixed from `dim - 1` down to 0.
pub trait Visitor {
    /// Called after coordinate `level` has been set (all higher ones are set too).
    fn fix(&mut self, _level: usize, _x: &[i64]) {}
    /// Called for every point with `Q(x) <= bound`; return `false` to stop.
    fn leaf(&mut self, x: &[i64], norm: f64) -> bool;
}

/// Scalar types usable in [`PartialSums`] and [`Incremental`].
pub trait Scalar: Copy + Default + std::ops::Add<Output = Self> + std::ops::Mul<Output = Self> {
    fn from_i64(v: i64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for i64 {
    #[inline]
    fn from_i64(v: i64) -> Self {
        v
    }
}

/// Cached sums Σ_{j>i} mᵢⱼxⱼ for every row i, refreshed only from the
/// highest coordinate that changed since the row was last read.
pub struct PartialSums<T: Scalar> {
    d: usize,
    m: Vec<T>,
    sigma: Vec<T>,
    stale: Vec<usize>,
}

impl<T: Scalar> PartialSums<T> {
    /// `m` is row-major d×d; only entries above the diagonal are read.
    pub fn new(d: usize, m: Vec<T>) -> Self {
        PartialSums { d, m, sigma: vec![T::default(); d * (d + 1)], stale: vec![d.saturating_sub(1); d] }
    }

    /// Records that coordinate `level` changed.
    #[inline]
    pub fn touch(&mut self, level: usize) {
        for s in self.stale.iter_mut().take(level) {
            if *s < level {
                *s = level;
            }
        }
    }

    /// Σ_{j>i} mᵢⱼxⱼ for the current x.
    #[inline]
    pub fn row(&mut self, i: usize, x: &[i64]) -> T {
        let d = self.d;
        let base = i * (d + 1);
        let top = self.stale[i];
        for j in (i + 1..=top).rev() {
            self.sigma[base + j] = self.sigma[base + j + 1] + self.m[i * d + j] * T::from_i64(x[j]);
        }
        self.stale[i] = i;
        self.sigma[base + i + 1]
    }
}

/// A quadratic form xᵗMx evaluated level by level during enumeration:
/// call [`Incremental::fix`] from [`Visitor::fix`] and read
/// [`Incremental::value`] at the leaf.
pub struct Incremental<T: Scalar> {
    diag: Vec<T>,
    sums: PartialSums<T>,
    acc: Vec<T>,
}

impl<T: Scalar + From<i8>> Incremental<T> {
    pub fn new(d: usize, m: Vec<T>) -> Self {
        let diag = (0..d).map(|i| m[i * d + i]).collect();
        Incremental { diag, sums: PartialSums::new(d, m), acc: vec![T::default(); d + 1] }
    }

    #[inline]
    pub fn fix(&mut self, level: usize, x: &[i64]) {
        self.sums.touch(level);
        let cross = self.sums.row(level, x);
        let xi = T::from_i64(x[level]);
        self.acc[level] = self.acc[level + 1] + xi * (self.diag[level] * xi + T::from(2) * cross);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.acc[0]
    }
}

/// LLL-reduces a positive definite Gram matrix. Returns `U` with
/// `Uᵗ G U` reduced (δ = 0.99); columns of `U` are the new basis vectors.
pub fn lll_reduce(g: &DMatrix<f64>) -> IntMatrix {
    let d = g.nrows();
    let mut u = IntMatrix::identity(d);
    let mut gm = g.clone();
    if d < 2 {
        return u;
    }
    let delta = 0.99;
    let mut k = 1;
    let mut guard = 0usize;
    while k < d {
        guard += 1;
        assert!(guard < 1_000_000, "LLL did not terminate");
        let (mut mu, _) = gso(&gm);
        for j in (0..k).rev() {
            let q = mu[(k, j)].round();
            if q != 0.0 {
                let qi = q as i64;
                for r in 0..d {
                    u[(r, k)] -= qi * u[(r, j)];
                }
                for r in 0..d {
                    gm[(r, k)] -= q * gm[(r, j)];
                }
                for c in 0..d {
                    gm[(k, c)] -= q * gm[(j, c)];
                }
                for l in 0..j {
                    mu[(k, l)] -= q * mu[(j, l)];
                }
                mu[(k, j)] -= q;
            }
        }
        let (mu, b) = gso(&gm);
        if b[k] >= (delta - mu[(k, k - 1)] * mu[(k, k - 1)]) * b[k - 1] {
            k += 1;
        } else {
            for r in 0..d {
                let t = u[(r, k)];
                u[(r, k)] = u[(r, k - 1)];
                u[(r, k - 1)] = t;
            }
            gm.swap_columns(k, k - 1);
            gm.swap_rows(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    u
}

/// Gram–Schmidt coefficients and squared lengths from a Gram matrix.
fn gso(g: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let d = g.nrows();
    let mut mu = DMatrix::zeros(d, d);
    let mut b = vec![0.0; d];
    for i in 0..d {
        for j in 0..i {
            let mut s = g[(i, j)];
            for l in 0..j {
                s -= mu[(j, l)] * mu[(i, l)] * b[l];
            }
            mu[(i, j)] = s / b[j];
        }
        let mut s = g[(i, i)];
        for l in 0..i {
            s -= mu[(i, l)] * mu[(i, l)] * b[l];
        }
        b[i] = s;
        mu[(i, i)] = 1.0;
    }
    (mu, b)
}

/// A prepared ellipsoid enumeration for one quadratic form.
pub struct Ellipsoid {
    dim: usize,
    /// Reduced basis: original coordinates are `basis * x`.
    pub basis: IntMatrix,
    /// Gram matrix in reduced coordinates.
    pub reduced: DMatrix<f64>,
    // Fincke–Pohst coefficients: Q(x) = Σ qᵢᵢ (xᵢ + Σ_{j>i} qᵢⱼ xⱼ)²
    q: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(gram: &DMatrix<f64>) -> Self {
        let basis = lll_reduce(gram);
        let uf = basis.to_f64();
        let reduced = uf.transpose() * gram * &uf;
        let reduced = (&reduced + reduced.transpose()) * 0.5;
        let d = gram.nrows();
        let mut q = reduced.clone();
        for i in 0..d {
            for j in i + 1..d {
                q[(j, i)] = q[(i, j)];
                q[(i, j)] /= q[(i, i)];
            }
            for k in i + 1..d {
                for l in k..d {
                    q[(k, l)] -= q[(k, i)] * q[(i, l)];
                }
            }
        }
        assert!((0..d).all(|i| q[(i, i)] > 0.0), "form is not positive definite");
        Ellipsoid { dim: d, basis, reduced, q }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Visits every reduced-coordinate point with `Q(x) <= bound`.
    ///
    /// With `half` set only one of each pair `±x` is visited (the one whose
    /// last nonzero coordinate is positive). The zero vector is visited only
    /// when `include_zero` is set. Returns `false` if the visitor stopped early.
    pub fn run<V: Visitor>(&self, bound: f64, half: bool, include_zero: bool, v: &mut V) -> bool {
        let d = self.dim;
        if d == 0 || bound < 0.0 {
            return true;
        }
        let q: Vec<f64> = (0..d * d).map(|k| self.q[(k / d, k % d)]).collect();
        let eps = 1e-12 * (1.0 + bound);
        let mut x = vec![0i64; d];
        let mut hi = vec![0i64; d];
        // remaining budget after fixing levels > i
        let mut rem = vec![0.0f64; d + 1];
        let mut center = vec![0.0f64; d];
        // all coordinates above level i are zero
        let mut zero_above = vec![true; d + 1];
        rem[d] = bound;
        let mut centers = PartialSums::new(d, q.clone());

        let mut i = d - 1;
        let open = |i: usize, x: &mut [i64], hi: &mut [i64], center: &mut [f64], rem: &[f64], zero_above: &[bool], cs: &mut PartialSums<f64>| {
            let c = -cs.row(i, x);
            center[i] = c;
            let r = (rem[i + 1].max(0.0) / q[i * d + i]).sqrt();
            let mut lo = (c - r - 1e-9).ceil() as i64;
            hi[i] = (c + r + 1e-9).floor() as i64;
            if half && zero_above[i + 1] {
                lo = lo.max(0);
            }
            x[i] = lo;
            cs.touch(i);
        };
        open(i, &mut x, &mut hi, &mut center, &rem, &zero_above, &mut centers);
        loop {
            if x[i] > hi[i] {
                i += 1;
                if i == d {
                    return true;
                }
                x[i] += 1;
                centers.touch(i);
                continue;
            }
            let t = x[i] as f64 - center[i];
            let r = rem[i + 1] - q[i * d + i] * t * t;
            if r < -eps {
                x[i] += 1;
                centers.touch(i);
                continue;
            }
            rem[i] = r;
            zero_above[i] = zero_above[i + 1] && x[i] == 0;
            v.fix(i, &x);
            if i == 0 {
                if (include_zero || !zero_above[0]) && !v.leaf(&x, (bound - r).max(0.0)) {
                    return false;
                }
                x[0] += 1;
                continue;
            }
            i -= 1;
            open(i, &mut x, &mut hi, &mut center, &rem, &zero_above, &mut centers);
        }
    }

    /// Maps reduced coordinates back to the original basis.
    pub fn lift(&self, x: &[i64]) -> Vec<i64> {
        self.basis.mul_vec(x)
    }

    /// Smallest value of the form on nonzero integer vectors.
    pub fn minimum(&self) -> f64 {
        struct Min(f64);
        impl Visitor for Min {
            fn leaf(&mut self, _x: &[i64], norm: f64) -> bool {
                self.0 = self.0.min(norm);
                true
            }
        }
        let first = (0..self.dim).map(|i| self.reduced[(i, i)]).fold(f64::INFINITY, f64::min);
        let mut m = Min(first);
        self.run(first * (1.0 + 1e-9), true, false, &mut m);
        m.0
    }
}

/// Collects all points with `Q(x) <= bound` in original coordinates.
pub fn collect_short(gram: &DMatrix<f64>, bound: f64, half: bool) -> Vec<(Vec<i64>, f64)> {
    struct Collect<'a> {
        e: &'a Ellipsoid,
        out: Vec<(Vec<i64>, f64)>,
    }
    impl Visitor for Collect<'_> {
        fn leaf(&mut self, x: &[i64], norm: f64) -> bool {
            self.out.push((self.e.lift(x), norm));
            true
        }
    }
    let e = Ellipsoid::new(gram);
    let mut c = Collect { e: &e, out: Vec::new() };
    e.run(bound, half, false, &mut c);
    c.out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &DMatrix<f64>, bound: f64, r: i64) -> usize {
        let d = g.nrows();
        let mut count = 0;
        let mut x = vec![-r; d];
        loop {
            let xv = DMatrix::from_fn(d, 1, |i, _| x[i] as f64);
            let v = (xv.transpose() * g * &xv)[(0, 0)];
            if x.iter().any(|&a| a != 0) && v <= bound + 1e-9 {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == d {
                    return count;
                }
                x[k] += 1;
                if x[k] <= r {
                    break;
                }
                x[k] = -r;
                k += 1;
            }
        }
    }

    #[test]
    fn matches_box_search_on_skewed_form() {
        let g = DMatrix::from_row_slice(3, 3, &[2.0, 1.3, 0.4, 1.3, 3.1, -0.7, 0.4, -0.7, 1.9]);
        let pts = collect_short(&g, 9.0, false);
        assert_eq!(pts.len(), brute(&g, 9.0, 6));
        let half = collect_short(&g, 9.0, true);
        assert_eq!(2 * half.len(), pts.len());
    }

    #[test]
    fn lll_is_unimodular_and_shortens() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 10.0, 10.0, 101.0]);
        let u = lll_reduce(&g);
        assert_eq!(u.det().magnitude().to_string(), "1");
        let e = Ellipsoid::new(&g);
        assert!((e.minimum() - 1.0).abs() < 1e-12);
        assert!(e.reduced[(1, 1)] < 2.0);
    }
}
