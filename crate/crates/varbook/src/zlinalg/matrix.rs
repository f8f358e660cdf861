use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row major.
///
/// Entries grow without bound during elimination, so fixed-width integers are
/// not an option anywhere in the elimination kernels. Zero-row and
/// zero-column matrices are legal and show up constantly as boundary maps of
/// complexes with empty degrees.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds from row-major data; length must be `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{}={} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Convenience constructor from machine-integer rows, mostly for tests
    /// and fixtures. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows in matrix literal"
        );
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
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

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.entries.iter().enumerate().all(|(k, e)| {
                if k / self.cols == k % self.cols {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Checked product; shape mismatch is a structural error.
    pub fn try_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cell = &mut out[(i, j)];
                        *cell += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] + &other[(i, j)]
        }))
    }

    pub fn try_sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] - &other[(i, j)]
        }))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    out[i] += a * &v[j];
                }
            }
        }
        Ok(out)
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        assert!(j < self.cols, "column {} out of range", j);
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        assert!(i < self.rows, "row {} out of range", i);
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack needs equal row counts, got {} and {}",
                self.rows, other.rows
            )));
        }
        Ok(IntMatrix::from_fn(
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self[(i, j)].clone()
                } else {
                    other[(i, j - self.cols)].clone()
                }
            },
        ))
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack needs equal column counts, got {} and {}",
                self.cols, other.cols
            )));
        }
        Ok(IntMatrix::from_fn(
            self.rows + other.rows,
            self.cols,
            |i, j| {
                if i < self.rows {
                    self[(i, j)].clone()
                } else {
                    other[(i - self.rows, j)].clone()
                }
            },
        ))
    }

    /// Submatrix picking the given rows and columns in the given order.
    /// Indices may repeat; each must be in range.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        assert!(rows.iter().all(|&i| i < self.rows), "row index out of range");
        assert!(cols.iter().all(|&j| j < self.cols), "col index out of range");
        IntMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix::from_fn(
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| match (i < self.rows, j < self.cols) {
                (true, true) => self[(i, j)].clone(),
                (false, false) => other[(i - self.rows, j - self.cols)].clone(),
                _ => BigInt::zero(),
            },
        )
    }

    pub fn set_col(&mut self, j: usize, v: &[BigInt]) {
        assert_eq!(v.len(), self.rows, "column length mismatch");
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
