use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{common_denominator, Rat};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rat>>", into = "Vec<Vec<Rat>>")]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ragged rows: expected {expected} columns, found {found}")]
pub struct RaggedRows {
    pub expected: usize,
    pub found: usize,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        RatMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; an empty list gives a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, RaggedRows> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(RaggedRows {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(RatMatrix::new(n, cols, data))
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let mut m = RatMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = v.clone();
            }
        }
        m
    }

    /// Convenience constructor from integer fractions `(p, q)`.
    pub fn from_fractions(rows: &[&[(i64, i64)]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(p, q)| Rat::new(p, q)).collect())
            .collect();
        RatMatrix::from_rows(rows).expect("rectangular input")
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

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        RatMatrix::new(self.cols, self.rows, data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|x| x * s).collect(),
        )
    }

    /// `self - s·I`.
    pub fn shift(&self, s: &Rat) -> Self {
        assert!(self.is_square(), "shift of a non-square matrix");
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i * self.cols + i] -= s;
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = RatMatrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        RatMatrix::new(rows.len(), cols.len(), data)
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let den = common_denominator(row);
                row.iter()
                    .map(|x| x.numer() * (&den / x.denom()))
                    .collect()
            })
            .collect()
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        bareiss_forward(&mut a, self.cols).len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let den = common_denominator(self.row(i));
            a.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&den / x.denom()))
                    .collect(),
            );
            scale *= den;
        }
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Rat::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = exact_div(v, &prev);
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = Rat::from_int(a[n - 1][n - 1].clone()) / Rat::from_int(scale);
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Reduced row echelon form and the pivot columns, computed fraction-free
    /// and normalized at the end so every pivot equals one.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.integer_rows();
        let pivots = bareiss_jordan(&mut a, self.cols);
        let mut data = Vec::with_capacity(self.data.len());
        for (r, row) in a.iter().enumerate() {
            if r < pivots.len() {
                let p = &row[pivots[r]];
                data.extend(row.iter().map(|x| Rat::new(x.clone(), p.clone())));
            } else {
                data.extend(std::iter::repeat(Rat::zero()).take(self.cols));
            }
        }
        (RatMatrix::new(self.rows, self.cols, data), pivots)
    }

    /// Basis of the right nullspace: one vector per free column, with a one in
    /// that column and zeros in the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, or `None` when it is singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut data = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            data.extend(self.row(i).iter().cloned());
            data.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
        }
        let (r, pivots) = RatMatrix::new(n, 2 * n, data).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            out.extend(r.row(i)[n..].iter().cloned());
        }
        Some(RatMatrix::new(n, n, out))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix::new(self.rows + other.rows, self.cols, data)
    }
}

fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    let (q, r) = v.div_rem(d);
    debug_assert!(r.is_zero(), "Bareiss division not exact");
    q
}

/// Fraction-free forward elimination; returns the pivot columns.
fn bareiss_forward(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = exact_div(v, &prev);
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Fraction-free Gauss–Jordan elimination; returns the pivot columns. Rows
/// beyond the rank are left zero.
fn bareiss_jordan(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let g = a[r].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_one() {
            for x in a[r].iter_mut() {
                *x = &*x / &g;
            }
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &pivot_row[c] * &*x - &f * y;
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "product dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl TryFrom<Vec<Vec<Rat>>> for RatMatrix {
    type Error = RaggedRows;
    fn try_from(rows: Vec<Vec<Rat>>) -> Result<Self, Self::Error> {
        RatMatrix::from_rows(rows)
    }
}

impl From<RatMatrix> for Vec<Vec<Rat>> {
    fn from(m: RatMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn inverse_round_trips() {
        let a = RatMatrix::from_fractions(&[&[(1, 2), (3, 1)], &[(-1, 4), (2, 3)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, RatMatrix::identity(2));
        assert!(RatMatrix::from_fractions(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]).inverse().is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = RatMatrix::from_fractions(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]);
        assert_eq!(m.kernel_basis(), vec![vec![r(-2, 1), r(1, 1)]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.determinant(), Rat::zero());
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let m = RatMatrix::identity(3);
        assert!(m.kernel_basis().is_empty());
        assert_eq!(m.rank(), 3);
        assert_eq!(m.determinant(), Rat::one());
    }

    #[test]
    fn shapovalov_level_two() {
        let m = RatMatrix::from_fractions(&[&[(-3, 2), (-3, 4)], &[(-3, 4), (-3, 8)]]);
        assert_eq!(m.determinant(), Rat::zero());
        assert_eq!(m.kernel_basis(), vec![vec![r(-1, 2), r(1, 1)]]);
    }

    #[test]
    fn determinant_with_row_swaps() {
        let m = RatMatrix::from_fractions(&[
            &[(0, 1), (1, 2), (1, 1)],
            &[(2, 3), (0, 1), (1, 1)],
            &[(1, 1), (1, 1), (0, 1)],
        ]);
        // 0·(0−1) − ½·(0−1) + 1·(2/3 − 0) = 7/6
        assert_eq!(m.determinant(), r(7, 6));
    }

    #[test]
    fn rref_normalizes_pivots() {
        let m = RatMatrix::from_fractions(&[&[(2, 1), (4, 1), (6, 1)], &[(1, 1), (3, 1), (5, 1)]]);
        let (e, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(e.row(0), &[r(1, 1), r(0, 1), r(-1, 1)]);
        assert_eq!(e.row(1), &[r(0, 1), r(1, 1), r(2, 1)]);
    }

    #[test]
    fn serde_round_trip() {
        let m = RatMatrix::from_fractions(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["0","1"],["0","0"]]"#);
        let back: RatMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(rows, cols)| {
            prop::collection::vec((-3i64..4, 1i64..4), rows * cols).prop_map(move |v| {
                RatMatrix::new(rows, cols, v.into_iter().map(|(p, q)| Rat::new(p, q)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(m in small_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Rat::is_zero));
            }
        }

        #[test]
        fn rank_matches_rref(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.rref().1.len());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn determinant_is_multiplicative(a in small_matrix(), b in small_matrix()) {
            let n = a.rows().min(a.cols()).min(b.rows()).min(b.cols());
            let idx: Vec<usize> = (0..n).collect();
            let a = a.select(&idx, &idx);
            let b = b.select(&idx, &idx);
            prop_assert_eq!((&a * &b).determinant(), a.determinant() * b.determinant());
        }
    }
}
