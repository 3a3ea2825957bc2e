//! Even positive definite lattices ℤⁿ with Gram matrix S, their bordered
//! forms S₀ (signature (1, n+1)) and S₁ (signature (2, n+2)), and exact
//! invariants: determinant, level, short vectors.

pub mod enumerate;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// An even positive definite Gram matrix together with its level.
#[derive(Clone, Debug, PartialEq)]
pub struct GramLattice {
    s: IntMatrix,
    level: u64,
    det: BigInt,
}

impl GramLattice {
    /// Rank n.
    pub fn rank(&self) -> usize {
        self.s.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.s
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// σ(x, y) = xᵗSy.
    pub fn sigma(&self, x: &[i64], y: &[i64]) -> i64 {
        self.s.bilinear(x, y)
    }

    /// Exact inverse S⁻¹.
    pub fn inverse(&self) -> Vec<Vec<BigRational>> {
        rational_inverse(&self.s).expect("validated Gram matrix is invertible")
    }

    pub fn bordered(&self) -> BorderedForms {
        bordered_forms(self)
    }
}

/// Checks symmetry, evenness and positive definiteness, then computes the level.
pub fn validate_gram(s: &IntMatrix) -> Result<GramLattice> {
    if !s.is_square() || s.rows() == 0 {
        return Err(Error::NotSquare);
    }
    let n = s.rows();
    for i in 0..n {
        for j in i + 1..n {
            if s[(i, j)] != s[(j, i)] {
                return Err(Error::NotSymmetric(i, j));
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| s[(i, i)] % 2 != 0) {
        return Err(Error::NotEven { index: i, value: s[(i, i)] });
    }
    let minors = s.leading_minors();
    if let Some(k) = minors.iter().position(|m| !m.is_positive()) {
        return Err(Error::NotPositiveDefinite(k + 1));
    }
    let det = minors[n - 1].clone();
    let level = level_of(s);
    Ok(GramLattice { s: s.clone(), level, det })
}

/// Least q with q·S⁻¹ integral and even on the diagonal.
fn level_of(s: &IntMatrix) -> u64 {
    let inv = rational_inverse(s).expect("positive definite");
    let mut q = BigInt::one();
    for (i, row) in inv.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let mut need = x.denom().clone();
            if i == j && x.numer().is_odd() {
                need *= 2;
            }
            q = q.lcm(&need);
        }
    }
    q.to_u64().expect("level fits in u64")
}

/// Gauss–Jordan over ℚ.
pub fn rational_inverse(s: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = s.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(s[(i, j)]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &a[c][k] * &f;
                    a[r][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// The forms S₀ and S₁ obtained by bordering −S, then S₀, with hyperbolic corners.
#[derive(Clone, Debug)]
pub struct BorderedForms {
    pub s0: IntMatrix,
    pub s1: IntMatrix,
}

impl BorderedForms {
    /// Q₀[y] = ½ yᵗS₀y on a real vector.
    pub fn q0(&self, y: &[f64]) -> f64 {
        0.5 * quad_f64(&self.s0, y)
    }

    /// Q₀ = S₀/2 as an exact rational matrix.
    pub fn q0_exact(&self) -> Vec<Vec<BigRational>> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.s0.to_rows().into_iter().map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into()) * &half).collect()).collect()
    }

    /// (positive, negative) eigenvalue counts of S₀ and S₁.
    pub fn signatures(&self) -> ((usize, usize), (usize, usize)) {
        (signature(&self.s0.to_f64()), signature(&self.s1.to_f64()))
    }
}

fn border(inner: &IntMatrix) -> IntMatrix {
    let m = inner.rows() + 2;
    let mut out = IntMatrix::zeros(m, m);
    out[(0, m - 1)] = 1;
    out[(m - 1, 0)] = 1;
    for i in 0..inner.rows() {
        for j in 0..inner.cols() {
            out[(i + 1, j + 1)] = inner[(i, j)];
        }
    }
    out
}

pub fn bordered_forms(l: &GramLattice) -> BorderedForms {
    let s0 = border(&l.s.scale(-1));
    let s1 = border(&s0);
    BorderedForms { s0, s1 }
}

pub fn quad_f64(m: &IntMatrix, y: &[f64]) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = m[(i, j)];
            if a != 0 {
                acc += a as f64 * y[i] * y[j];
            }
        }
    }
    acc
}

/// Eigenvalue sign count at tolerance 1e-9.
pub fn signature(m: &DMatrix<f64>) -> (usize, usize) {
    let ev = m.clone().symmetric_eigenvalues();
    let pos = ev.iter().filter(|&&e| e > 1e-9).count();
    let neg = ev.iter().filter(|&&e| e < -1e-9).count();
    (pos, neg)
}

/// Built-in root lattices. Only E₈ carries a specific ordering convention;
/// the others are the usual Cartan matrices.
pub fn catalog(name: &str) -> Result<GramLattice> {
    let rows: Vec<Vec<i64>> = match name {
        "A1" => vec![vec![2]],
        "A2" => vec![vec![2, -1], vec![-1, 2]],
        "A4" => cartan_a(4),
        "D4" => vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]],
        "E8" => vec![
            vec![2, -1, 0, 0, 0, 0, 0, 0],
            vec![-1, 2, -1, 0, 0, 0, 0, 0],
            vec![0, -1, 2, -1, 0, 0, 0, 0],
            vec![0, 0, -1, 2, -1, 0, 0, 0],
            vec![0, 0, 0, -1, 2, -1, 0, -1],
            vec![0, 0, 0, 0, -1, 2, -1, 0],
            vec![0, 0, 0, 0, 0, -1, 2, 0],
            vec![0, 0, 0, 0, -1, 0, 0, 2],
        ],
        other => return Err(Error::UnknownLattice(other.to_string())),
    };
    validate_gram(&IntMatrix::from_rows(&rows))
}

pub const CATALOG: [&str; 5] = ["A1", "A2", "A4", "D4", "E8"];

fn cartan_a(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// Parses the text format: a rank line followed by that many rows.
pub fn parse_gram(text: &str) -> Result<GramLattice> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("rank line: {e}")))?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("row {i}: {e}"))))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing data after matrix".into()));
    }
    validate_gram(&IntMatrix::from_rows(&rows))
}

/// Catalog name or path to a Gram file.
pub fn load(spec: &str) -> Result<GramLattice> {
    if CATALOG.contains(&spec) {
        return catalog(spec);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    parse_gram(&text)
}

/// Nonzero vectors with S[x] <= bound, one per ± pair.
#[derive(Clone, Debug, Serialize)]
pub struct ShortVectors {
    pub vectors: Vec<Vec<i64>>,
    /// Always true: only one of x, −x is listed.
    pub up_to_sign: bool,
}

impl ShortVectors {
    /// Count including both signs.
    pub fn count(&self) -> usize {
        2 * self.vectors.len()
    }
}

pub fn short_vectors(l: &GramLattice, bound: i64) -> ShortVectors {
    let g = l.s.to_f64();
    let mut vectors: Vec<Vec<i64>> = enumerate::collect_short(&g, bound as f64 + 0.5, true)
        .into_iter()
        .map(|(v, _)| v)
        .filter(|v| l.s.bilinear(v, v) <= bound)
        .map(|v| {
            // lexicographic sign normalization: first nonzero entry positive
            let neg = v.iter().find(|&&a| a != 0).is_some_and(|&a| a < 0);
            if neg {
                v.into_iter().map(|a| -a).collect()
            } else {
                v
            }
        })
        .collect();
    vectors.sort_by(|a, b| l.s.bilinear(a, a).cmp(&l.s.bilinear(b, b)).then_with(|| b.cmp(a)));
    ShortVectors { vectors, up_to_sign: true }
}

/// Both elementary divisors equal to 1.
pub fn is_primitive(m: &IntMatrix) -> bool {
    let inv = m.smith_invariants();
    inv.len() == m.cols() && inv.iter().all(|&d| d == 1)
}

/// Result of the S[x] = 2 search.
#[derive(Clone, Debug, PartialEq)]
pub struct Norm2Search {
    pub vector: Option<Vec<i64>>,
    /// Bound on S[x] used by the exhaustive search.
    pub searched_bound: i64,
}

/// Some x with S[x] = 2. Standard basis vectors are tried first; otherwise
/// the search is exhaustive over S[x] <= 2, so `None` is definitive.
pub fn find_norm2_vector(l: &GramLattice) -> Norm2Search {
    let n = l.rank();
    if let Some(i) = (0..n).find(|&i| l.s[(i, i)] == 2) {
        let mut e = vec![0; n];
        e[i] = 1;
        return Norm2Search { vector: Some(e), searched_bound: 2 };
    }
    let sv = short_vectors(l, 2);
    Norm2Search { vector: sv.vectors.into_iter().find(|v| l.s.bilinear(v, v) == 2), searched_bound: 2 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_invariants() {
        let e8 = catalog("E8").unwrap();
        assert_eq!(e8.det(), &BigInt::one());
        assert_eq!(e8.level(), 1);
        assert_eq!(catalog("A1").unwrap().level(), 4);
        assert_eq!(catalog("A2").unwrap().level(), 3);
        assert_eq!(catalog("D4").unwrap().level(), 2);
        assert_eq!(catalog("A4").unwrap().level(), 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(validate_gram(&IntMatrix::from_rows(&[vec![1]])), Err(Error::NotEven { index: 0, value: 1 }));
        assert_eq!(validate_gram(&IntMatrix::from_rows(&[vec![2, 1], vec![0, 2]])), Err(Error::NotSymmetric(0, 1)));
        assert_eq!(validate_gram(&IntMatrix::from_rows(&[vec![2, 3], vec![3, 2]])), Err(Error::NotPositiveDefinite(2)));
        assert_eq!(validate_gram(&IntMatrix::from_rows(&[vec![-2]])), Err(Error::NotPositiveDefinite(1)));
    }

    #[test]
    fn bordered_rank_one() {
        let b = catalog("A1").unwrap().bordered();
        assert_eq!(b.s0.to_rows(), vec![vec![0, 0, 1], vec![0, -2, 0], vec![1, 0, 0]]);
        assert_eq!(b.q0(&[1.0, 0.0, 1.0]), 1.0);
        assert_eq!(b.signatures(), ((1, 2), (2, 3)));
    }

    #[test]
    fn short_vector_counts() {
        assert_eq!(short_vectors(&catalog("A1").unwrap(), 2).count(), 2);
        assert_eq!(short_vectors(&catalog("E8").unwrap(), 2).count(), 240);
        assert_eq!(short_vectors(&catalog("A2").unwrap(), 0).count(), 0);
        assert_eq!(short_vectors(&catalog("D4").unwrap(), 2).count(), 24);
    }

    #[test]
    fn norm2_search() {
        let e1 = |n: usize| {
            let mut v = vec![0; n];
            v[0] = 1;
            v
        };
        assert_eq!(find_norm2_vector(&catalog("E8").unwrap()).vector, Some(e1(8)));
        assert_eq!(find_norm2_vector(&catalog("A2").unwrap()).vector, Some(e1(2)));
        let four = validate_gram(&IntMatrix::from_rows(&[vec![4]])).unwrap();
        assert_eq!(find_norm2_vector(&four).vector, None);
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let l = parse_gram("2\n2 -1\n-1 2\n").unwrap();
        assert_eq!(l.level(), 3);
        assert!(matches!(parse_gram("2\n2 1\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_gram("1\n3\n"), Err(Error::NotEven { .. })));
    }
}
