//! Dense matrices over any `RingElem`, with exact elimination over `Scalar`.

use std::fmt;

use crate::combinatorics::Permutation;
use crate::error::PolyError;
use crate::poly::{Family, Poly, VarId};
use crate::ring::RingElem;
use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Clone> Matrix<R> {
    pub fn filled(rows: usize, cols: usize, fill: R) -> Self {
        Self {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    /// Entries indexed from 0.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
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

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }
}

impl<R: RingElem> Matrix<R> {
    pub fn identity(n: usize, one: &R) -> Self {
        let zero = one.zero_like();
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    /// Panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let zero = self.data.first().or(other.data.first()).map(R::zero_like);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone().expect("non-empty product has entries");
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc.add_assign_ref(&a.mul_ref(other.get(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add_ref(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape mismatch");
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub_ref(other.get(i, j)))
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|e| e.mul_ref(c))
    }

    pub fn trace(&self, zero: &R) -> R {
        (0..self.rows.min(self.cols)).fold(zero.clone(), |acc, i| acc.add_ref(self.get(i, i)))
    }

    /// Leibniz expansion. Meant for small matrices and for entries that are not field elements.
    pub fn det_expansion(&self, one: &R) -> R {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut acc = one.zero_like();
        for p in Permutation::all(self.rows) {
            let mut term = one.clone();
            for i in 0..self.rows {
                term = term.mul_ref(self.get(i, p.apply(i + 1) - 1));
                if term.is_zero() {
                    break;
                }
            }
            if term.is_zero() {
                continue;
            }
            if p.sign() < 0 {
                acc = acc.sub_ref(&term);
            } else {
                acc.add_assign_ref(&term);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }
}

impl Matrix<Poly> {
    /// The generic matrix `(v_ij)` whose entries are single coordinate variables.
    pub fn generic(field: Field, family: Family, arrow: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| Poly::var(field, VarId::new(family, arrow, i + 1, j + 1)))
    }
}

impl Matrix<Scalar> {
    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect())
    }

    pub fn to_poly(&self, field: Field) -> Matrix<Poly> {
        self.map(|c| if c.is_zero() { Poly::zero(field) } else { Poly::constant(c.clone()) })
    }

    /// Gaussian elimination.
    pub fn det(&self, field: Field) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut rows = self.to_rows();
        let n = self.rows;
        let mut det = field.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return field.zero();
            };
            if pivot != col {
                rows.swap(pivot, col);
                det = -det;
            }
            let p = rows[col][col].clone();
            det = &det * &p;
            let inv = p.inv().expect("pivot is non-zero");
            for r in col + 1..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let factor = &rows[r][col] * &inv;
                for c in col..n {
                    let delta = &factor * &rows[col][c];
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self, field: Field) -> Result<Self, PolyError> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
                row
            })
            .collect();
        let (rank, _) = row_reduce(&mut aug, n);
        if rank < n {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::from_rows(aug.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        row_reduce(&mut rows, self.cols).0
    }
}

/// Reduced row echelon form on the first `limit` columns, in place.
/// Returns the rank and the pivot columns.
pub fn row_reduce(rows: &mut [Vec<Scalar>], limit: usize) -> (usize, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..limit {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("pivot is non-zero");
        let pivot_row: Vec<Scalar> = rows[r].iter().map(|v| v * &inv).collect();
        rows[r] = pivot_row;
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for c in col..rows[i].len() {
                if rows[r][c].is_zero() {
                    continue;
                }
                let delta = &factor * &rows[r][c];
                rows[i][c] = &rows[i][c] - &delta;
            }
        }
        pivots.push(col);
        r += 1;
    }
    (r, pivots)
}

/// Rank of a list of equal-length rows.
pub fn rank_of_rows(rows: &[Vec<Scalar>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut work = rows.to_vec();
    row_reduce(&mut work, width).0
}

/// A basis of `{v : M v = 0}` for `M` given by its rows of length `width`.
pub fn kernel_basis(rows: &[Vec<Scalar>], width: usize, field: Field) -> Vec<Vec<Scalar>> {
    let mut work = rows.to_vec();
    let (rank, pivots) = row_reduce(&mut work, width);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); width];
            v[f] = field.one();
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = work[i][f].neg_ref();
            }
            v
        })
        .collect()
}

impl<R: fmt::Display> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}
