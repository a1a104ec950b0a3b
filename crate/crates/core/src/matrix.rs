//! Small dense matrices over a [`Field`], with exact Gaussian elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField};

/// Pivot tolerance used by float elimination when the caller has no better
/// scale information.
pub const DEFAULT_FLOAT_PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

/// Outcome of reducing a matrix to reduced row echelon form.
struct Echelon<F> {
    reduced: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Self { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>]) -> Result<Self> {
        let m = cols.len();
        let n = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Ok(Self::from_fn(n, m, |r, c| cols[c][r].clone()))
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
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

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.data.iter()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() + other[(r, c)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() - other[(r, c)].clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    fn echelon(&self, tol: f64) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let best = pivot_row(&m, row, col, tol);
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = F::one() / m[(row, col)].clone();
            for c in col..m.cols {
                m[(row, c)] = m[(row, c)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let delta = factor.clone() * m[(row, c)].clone();
                    m[(r, c)] = m[(r, c)].clone() - delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn default_tol() -> f64 {
        if F::EXACT {
            0.0
        } else {
            DEFAULT_FLOAT_PIVOT_TOL
        }
    }

    pub fn rank(&self) -> usize {
        self.rank_with_tol(Self::default_tol())
    }

    pub fn rank_with_tol(&self, tol: f64) -> usize {
        self.echelon(tol).pivots.len()
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let Echelon { reduced, pivots } = self.echelon(Self::default_tol());
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Determinant by elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        let tol = Self::default_tol();
        for col in 0..n {
            let best = pivot_row(&m, col, col, tol);
            let Some(p) = best else { return F::zero() };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone() / pivot.clone();
                for c in col..n {
                    if m[(col, c)].is_zero() {
                        continue;
                    }
                    let delta = factor.clone() * m[(col, c)].clone();
                    m[(r, c)] = m[(r, c)].clone() - delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                F::one()
            } else {
                F::zero()
            }
        });
        let Echelon { reduced, pivots } = aug.echelon(Self::default_tol());
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Degenerate("matrix is singular".into()));
        }
        Ok(Self::from_fn(n, n, |r, c| reduced[(r, c + n)].clone()))
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>> {
        Ok(self.inverse()?.mul_vec(b))
    }
}

/// First nonzero entry at or below `from` in column `col` for exact fields,
/// the largest one for floats.
fn pivot_row<F: Field>(m: &Matrix<F>, from: usize, col: usize, tol: f64) -> Option<usize> {
    if F::EXACT {
        return (from..m.rows).find(|&r| !m[(r, col)].is_zero());
    }
    (from..m.rows)
        .filter(|&r| !m[(r, col)].is_negligible(tol))
        .max_by(|&a, &b| m[(a, col)].magnitude().total_cmp(&m[(b, col)].magnitude()))
}

impl<F: ComplexField> Matrix<F> {
    pub fn conj(&self) -> Self {
        self.map(ComplexField::conj)
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn real_part(&self) -> Matrix<F::Real> {
        self.map(ComplexField::re)
    }

    pub fn imag_part(&self) -> Matrix<F::Real> {
        self.map(ComplexField::im)
    }

    /// Real `2n×2n` form of a Hermitian `n×n` matrix `A + iB`, namely
    /// `[[A, -B], [B, A]]`. Its signature is twice that of the Hermitian form.
    pub fn hermitian_to_real_symmetric(&self) -> Matrix<F::Real> {
        let n = self.rows;
        Matrix::from_fn(2 * n, 2 * n, |r, c| {
            let z = &self[(r % n, c % n)];
            match (r < n, c < n) {
                (true, true) | (false, false) => z.re(),
                (true, false) => -z.im(),
                (false, true) => z.im(),
            }
        })
    }
}

impl<R: RealField> Matrix<R> {
    pub fn complexify(&self) -> Matrix<R::Complex> {
        self.map(|x| R::Complex::from_real(x.clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && *self == self.transpose().neg()
    }
}

use num_traits::Zero;

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<F: Field>(s: &F, a: &[F]) -> Vec<F> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn unit_vector<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

pub fn vec_max_abs<F: Field>(a: &[F]) -> f64 {
    a.iter().map(Field::magnitude).fold(0.0, f64::max)
}
