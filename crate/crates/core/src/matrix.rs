//! Small dense row-major matrices over any ring.
//!
//! Sizes here never exceed 4×4, so determinants use cofactor expansion (no
//! division, works over the integers) and inverses use Gauss-Jordan.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Num, Signed};

use crate::error::{Error, Result};
use crate::rational::Rat;

pub trait Scalar: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> {}
impl<T: Clone + fmt::Debug + PartialEq + Num + Neg<Output = T>> Scalar for T {}

/// Scalars with exact or well-behaved division, used for inverses.
pub trait Field: Scalar + Signed + PartialOrd {}
impl Field for Rat {}
impl Field for f64 {}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// `self * 1`.
    pub fn row_sums(&self) -> Vec<T> {
        self.rows()
            .map(|r| r.iter().fold(T::zero(), |acc, x| acc + x.clone()))
            .collect()
    }

    pub fn entry_sum(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc + x.clone())
    }

    /// `Pᵀ · self · P`.
    pub fn congruence(&self, p: &Matrix<T>) -> Matrix<T> {
        &(&p.transpose() * self) * p
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.rows).collect();
        self.minor_det(&idx, 0)
    }

    fn minor_det(&self, cols: &[usize], row: usize) -> T {
        match cols.len() {
            0 => T::one(),
            1 => self[(row, cols[0])].clone(),
            2 => {
                self[(row, cols[0])].clone() * self[(row + 1, cols[1])].clone()
                    - self[(row, cols[1])].clone() * self[(row + 1, cols[0])].clone()
            }
            _ => {
                let mut acc = T::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let a = &self[(row, c)];
                    if a.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = a.clone() * self.minor_det(&rest, row + 1);
                    acc = if k % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }
}

impl<T: Field> Matrix<T> {
    /// Gauss-Jordan with partial pivoting on magnitude.
    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Matrix<T> = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&x, &y| {
                    a[(x, col)]
                        .abs()
                        .partial_cmp(&a[(y, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .ok_or(Error::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() / p.clone();
                inv[(col, j)] = inv[(col, j)].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(col, j)].clone();
                }
            }
        }
        Ok(inv)
    }
}

impl<T> Matrix<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Matrix<f64> {
    pub fn max_abs_diff(&self, other: &Matrix<f64>) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }
}

impl Matrix<Rat> {
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(crate::rational::to_f64)
    }

    /// `Some` when every entry is an integer.
    pub fn to_integer(&self) -> Option<Matrix<BigInt>> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }
}

impl Matrix<BigInt> {
    pub fn to_rational(&self) -> Matrix<Rat> {
        self.map(|x| Rat::from_integer(x.clone()))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if !a.is_zero() {
                    acc = acc + a.clone() * rhs[(k, j)].clone();
                }
            }
            acc
        })
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Exact rational matrix from small integers.
pub fn rat_matrix<const C: usize>(rows: &[[i64; C]]) -> Matrix<Rat> {
    let rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| crate::rational::int(x)).collect())
        .collect();
    Matrix::from_rows(&rows)
}

pub fn int_matrix<const C: usize>(rows: &[[i64; C]]) -> Matrix<BigInt> {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    Matrix::from_rows(&rows)
}

pub fn permutation_matrix<T: Scalar>(sigma: &[usize]) -> Matrix<T> {
    let n = sigma.len();
    Matrix::from_fn(n, n, |i, j| if sigma[i] == j { T::one() } else { T::zero() })
}
