//! Dense exact rational linear algebra.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    /// Operand shapes do not line up.
    DimensionMismatch { expected: usize, found: usize },
    /// Rows supplied to a constructor had different lengths.
    RaggedRows,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            LinalgError::RaggedRows => f.write_str("rows have different lengths"),
        }
    }
}

impl core::error::Error for LinalgError {}

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str("  ")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("\n")?;
        }
        f.write_str("]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows. An empty slice yields a `0 x cols` matrix
    /// only through [`RationalMatrix::zeros`]; here it gives `0 x 0`.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::RaggedRows);
        }
        Ok(RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Builds an `rows x cols` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Integer matrix in row-major order. Panics if `values.len() != rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "value count does not match shape");
        RationalMatrix {
            rows,
            cols,
            data: values.iter().map(|&v| crate::rat(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `self * diag(d)`, scaling column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[Rational]) -> Result<Self, LinalgError> {
        if d.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: d.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (j, s) in d.iter().enumerate() {
                let idx = i * self.cols + j;
                out.data[idx] *= s;
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hconcat(&self, rhs: &RationalMatrix) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for j in col..m.cols {
                let idx = row * m.cols + j;
                m.data[idx] *= &inv;
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let delta = &factor * m.get(row, j);
                    let idx = i * m.cols + j;
                    m.data[idx] -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Basis of `{x : M x = 0}` read off the reduced row echelon form: one vector
/// per free column, with a `1` in that column.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); m.cols()];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            v
        })
        .collect()
}

/// Exact rank by fraction-free elimination over the integers.
///
/// Each row is cleared of denominators first; elimination then uses
/// cross-multiplication and divides every updated row by its content, so no
/// fractions are ever formed.
pub fn rank(m: &RationalMatrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    let cols = m.cols();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pivot = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..cols {
                row[j] = &pivot * &row[j] - &factor * &pivot_row[j];
            }
            remove_content(row);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g > BigInt::one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Whether every vector of `v` lies in `span(w)`; decided by comparing the
/// rank of `w` with the rank of `w` augmented by `v`.
pub fn span_contained(v: &[Vec<Rational>], w: &[Vec<Rational>]) -> Result<bool, LinalgError> {
    if v.is_empty() {
        return Ok(true);
    }
    let len = v[0].len();
    for x in v.iter().chain(w) {
        if x.len() != len {
            return Err(LinalgError::DimensionMismatch {
                expected: len,
                found: x.len(),
            });
        }
    }
    if v.iter().all(|x| x.iter().all(Zero::is_zero)) {
        return Ok(true);
    }
    if w.is_empty() {
        return Ok(false);
    }
    let base = RationalMatrix::from_rows(w)?;
    let mut all: Vec<Vec<Rational>> = w.to_vec();
    all.extend_from_slice(v);
    let augmented = RationalMatrix::from_rows(&all)?;
    Ok(rank(&base) == rank(&augmented))
}

/// Basis of the orthogonal complement of `span(vectors)` in dimension `dim`.
pub fn orthogonal_complement(vectors: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return (0..dim)
            .map(|i| {
                let mut e = vec![Rational::zero(); dim];
                e[i] = Rational::one();
                e
            })
            .collect();
    }
    let m = RationalMatrix::from_rows(vectors).expect("vectors share a length");
    kernel_basis(&m)
}

/// Indices of a maximal linearly independent subset of `vectors`, chosen
/// greedily in order.
pub fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let dim = vectors[0].len();
    let m = RationalMatrix::from_columns(dim, vectors).expect("vectors share a length");
    m.rref().1
}

/// Whether a vector is the zero vector.
pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
