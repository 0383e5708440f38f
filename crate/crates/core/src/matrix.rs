//! Row-major matrices over any of the crate's coefficient rings.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::rat::Rat;
use crate::ratfun::RatFun;

/// Commutative ring with owned operator impls; blanket-implemented.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}
impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// Exact division inside an integral domain; panics when the quotient does
/// not exist. Bareiss elimination only ever divides by earlier pivots, where
/// exactness is guaranteed.
pub trait ExactDiv: Ring {
    fn exact_div(&self, d: &Self) -> Self;
}

impl ExactDiv for Rat {
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

impl ExactDiv for Poly {
    fn exact_div(&self, d: &Self) -> Self {
        Poly::exact_div(self, d)
    }
}

impl ExactDiv for RatFun {
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type PolyMatrix = Matrix<Poly>;
pub type RatMatrix = Matrix<Rat>;
pub type RatFunMatrix = Matrix<RatFun>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn from_rows(rows_data: Vec<Vec<T>>) -> Self {
        let rows = rows_data.len();
        assert!(rows > 0, "matrix needs at least one row");
        let cols = rows_data[0].len();
        assert!(rows_data.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows,
            cols,
            entries: rows_data.into_iter().flatten().collect(),
        }
    }

    pub fn fill(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<T> {
        self.row(r).to_vec()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<S: Clone>(&self, mut f: impl FnMut(&T) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Stack vertically.
    pub fn vstack(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.entries[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.entries[r * self.cols + c]
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn add_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }

    pub fn sub_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }

    pub fn scale_mat(&self, c: &T) -> Matrix<T> {
        self.map(|e| e.clone() * c.clone())
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut acc = T::zero();
        for i in 0..self.rows {
            acc = acc + self[(i, i)].clone();
        }
        acc
    }
}

impl<T: ExactDiv> Matrix<T> {
    /// Fraction-free Bareiss determinant; exact in any integral domain.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut m = self.clone();
        let mut prev = T::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(pivot) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return T::zero();
                };
                m.swap_rows(k, pivot);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m[(k, k)].clone() * m[(i, j)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone();
                    m[(i, j)] = t.exact_div(&prev);
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

/// Field operations via plain Gaussian elimination.
impl<T: Ring + Div<Output = T>> Matrix<T> {
    fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let mut rank = 0;
        let mut pivot_cols = Vec::new();
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(rank, p);
            let inv = T::one() / self[(rank, col)].clone();
            for j in col..self.cols {
                self[(rank, j)] = self[(rank, j)].clone() * inv.clone();
            }
            for r in 0..self.rows {
                if r != rank && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    for j in col..self.cols {
                        let t = f.clone() * self[(rank, j)].clone();
                        self[(r, j)] = self[(r, j)].clone() - t;
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank, pivot_cols)
    }

    pub fn rref(&self) -> (Matrix<T>, usize, Vec<usize>) {
        let mut m = self.clone();
        let (rank, pivots) = m.rref_in_place();
        (m, rank, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().0
    }

    /// Basis of the right null space {x : M x = 0}, one vector per free
    /// column, in ascending free-column order with the free coordinate 1.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, _, pivots) = self.rref();
        let is_pivot = |c: usize| pivots.contains(&c);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot(c)) {
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero() - r[(i, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse; None when singular.
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                T::one()
            } else {
                T::zero()
            }
        });
        let (_, pivots) = aug.rref_in_place();
        // invertible iff the left block reduces to the identity
        if pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) || pivots.len() < n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.entries[r * self.cols + c])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Entrywise exact evaluation of a polynomial matrix.
pub fn eval_matrix(m: &PolyMatrix, xi: &Rat) -> RatMatrix {
    m.map(|p| p.eval(xi))
}
