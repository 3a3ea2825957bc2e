//! Dense integer matrices with exact Hermite and Smith reductions.
//!
//! Entries are stored as `i64`; reductions run in `i128` and convert back
//! with an overflow check. Every matrix handled by this crate is tiny
//! (at most a dozen rows) with small entries, so this never triggers in
//! practice, but a silent wrap would corrupt a class set, hence the panic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in exact matrix arithmetic")
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc += self[(i, k)] as i128 * other[(k, j)] as i128;
                }
                out[(i, j)] = narrow(acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| narrow(self.row(i).iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()))
            .collect()
    }

    /// xᵗ M y.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> i64 {
        let my = self.mul_vec(y);
        narrow(x.iter().zip(&my).map(|(&a, &b)| a as i128 * b as i128).sum())
    }

    /// The bracket M[X] = Xᵗ M X.
    pub fn bracket(&self, x: &IntMatrix) -> IntMatrix {
        x.transpose().mul(&self.mul(x))
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| narrow(a as i128 + b as i128)).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: i64) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| narrow(a as i128 * k as i128)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] as f64)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Determinants of the leading principal submatrices, sizes 1..=n.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        (1..=self.rows).map(|k| self.submatrix(0..k, 0..k).det()).collect()
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Elementary divisors (Smith normal form diagonal), nonzero ones only.
    pub fn smith_invariants(&self) -> Vec<i64> {
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let (m, n) = (self.rows, self.cols);
        let mut out = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry in the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // enforce the divisibility chain before fixing this pivot
            let p = a[t][t];
            if let Some(i) = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0)) {
                for j in t..n {
                    let v = a[i][j];
                    a[t][j] += v;
                }
                continue;
            }
            out.push(narrow(p.abs()));
            t += 1;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Row Hermite normal form with transforms: `u * a = h` and `uinv = u⁻¹`.
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub uinv: IntMatrix,
    /// Column index of each pivot, one per nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Row-style Hermite form: pivots positive, entries above each pivot in `[0, pivot)`.
pub fn hermite(a: &IntMatrix) -> Hermite {
    let (m, n) = (a.rows, a.cols);
    let mut h: Vec<Vec<i128>> = a.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i128).collect()).collect();
    let mut uinv = u.clone();
    let mut pivots = Vec::new();

    // row_i -= q row_r on h and u; col_r += q col_i on uinv
    fn sub_row(h: &mut [Vec<i128>], u: &mut [Vec<i128>], uinv: &mut [Vec<i128>], i: usize, r: usize, q: i128) {
        if q == 0 {
            return;
        }
        for j in 0..h[0].len() {
            h[i][j] -= q * h[r][j];
        }
        for j in 0..u.len() {
            u[i][j] -= q * u[r][j];
        }
        for row in uinv.iter_mut() {
            row[r] += q * row[i];
        }
    }
    fn swap_rows(h: &mut [Vec<i128>], u: &mut [Vec<i128>], uinv: &mut [Vec<i128>], i: usize, r: usize) {
        h.swap(i, r);
        u.swap(i, r);
        for row in uinv.iter_mut() {
            row.swap(i, r);
        }
    }

    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| h[i][col] != 0).min_by_key(|&i| h[i][col].abs());
            let Some(p) = piv else { break };
            swap_rows(&mut h, &mut u, &mut uinv, r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[i][col] != 0 {
                    let q = h[i][col].div_euclid(h[r][col]);
                    sub_row(&mut h, &mut u, &mut uinv, i, r, q);
                    done &= h[i][col] == 0;
                }
            }
            if done {
                break;
            }
        }
        if h[r][col] == 0 {
            continue;
        }
        if h[r][col] < 0 {
            for v in h[r].iter_mut() {
                *v = -*v;
            }
            for v in u[r].iter_mut() {
                *v = -*v;
            }
            for row in uinv.iter_mut() {
                row[r] = -row[r];
            }
        }
        for i in 0..r {
            let q = h[i][col].div_euclid(h[r][col]);
            sub_row(&mut h, &mut u, &mut uinv, i, r, q);
        }
        pivots.push(col);
        r += 1;
    }
    let back = |v: Vec<Vec<i128>>| IntMatrix::from_rows(&v.into_iter().map(|r| r.into_iter().map(narrow).collect::<Vec<_>>()).collect::<Vec<_>>());
    let h = if m == 0 { IntMatrix::zeros(0, n) } else { back(h) };
    Hermite { h, u: back(u), uinv: back(uinv), pivots }
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// A unimodular matrix whose first column is the primitive vector `v`.
pub fn complete_to_basis(v: &[i64]) -> IntMatrix {
    let col = IntMatrix::from_columns(&[v.to_vec()]);
    let hf = hermite(&col);
    assert_eq!(hf.h[(0, 0)], 1, "vector is not primitive");
    hf.uinv
}

/// ℤ-basis of {x : aᵗx = 0}, as columns.
pub fn kernel_of_row(a: &[i64]) -> IntMatrix {
    let n = a.len();
    let hf = hermite(&IntMatrix::from_columns(&[a.to_vec()]));
    let start = usize::from(a.iter().any(|&x| x != 0));
    let cols: Vec<Vec<i64>> = (start..n).map(|i| hf.u.row(i).to_vec()).collect();
    IntMatrix::from_columns(&cols)
}

/// gcd of all k×k minors, by direct enumeration. Used as an oracle.
pub fn minor_gcd(a: &IntMatrix, k: usize) -> BigInt {
    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = combos(n - 1, k);
        for mut c in combos(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }
    let mut g = BigInt::zero();
    for rs in combos(a.rows, k) {
        for cs in combos(a.cols, k) {
            let mut sub = IntMatrix::zeros(k, k);
            for (x, &i) in rs.iter().enumerate() {
                for (y, &j) in cs.iter().enumerate() {
                    sub[(x, y)] = a[(i, j)];
                }
            }
            g = g.gcd(&sub.det());
        }
    }
    g.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_small_cases() {
        let m = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(m.det(), BigInt::from(3));
        let z = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(z.det(), BigInt::from(-1));
    }

    #[test]
    fn hermite_transform_relations() {
        let a = IntMatrix::from_rows(&[vec![4, 6, 2], vec![2, 1, 7], vec![0, 3, 3], vec![6, 7, 9]]);
        let hf = hermite(&a);
        assert_eq!(hf.u.mul(&a), hf.h);
        assert_eq!(hf.u.mul(&hf.uinv), IntMatrix::identity(4));
        for (r, &c) in hf.pivots.iter().enumerate() {
            assert!(hf.h[(r, c)] > 0);
            for i in 0..r {
                assert!((0..hf.h[(r, c)]).contains(&hf.h[(i, c)]));
            }
        }
    }

    #[test]
    fn smith_of_diagonal_and_mixed() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(a.smith_invariants(), vec![1, 6]);
        let b = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8], vec![0, 2]]);
        assert_eq!(b.smith_invariants(), vec![2, 2]);
    }

    #[test]
    fn kernel_and_completion() {
        let k = kernel_of_row(&[2, 3, 5]);
        assert_eq!(k.cols(), 2);
        for j in 0..2 {
            let c = k.col(j);
            assert_eq!(2 * c[0] + 3 * c[1] + 5 * c[2], 0);
        }
        let u = complete_to_basis(&[3, 5, -2]);
        assert_eq!(u.col(0), vec![3, 5, -2]);
        assert_eq!(u.det().abs(), BigInt::one());
    }
}
