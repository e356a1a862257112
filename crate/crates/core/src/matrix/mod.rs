//! Dense matrices over rationals, radicals and binary64, plus the kernels
//! shared by every other module.

mod det;
mod eigen;
mod json;
mod minor;

pub use det::{det_exact, det_float, rank_exact};
pub use eigen::{is_psd_float, symmetric_eigenvalues, PsdReport, PsdVerdict};
pub use minor::{
    classify_float_minor, hadamard_scale, minor, minor_exact, minor_float, FloatSign, MinorSpec,
    MinorValue,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{radical_mul, RadicalProduct, RadicalScalar, Rational};

/// Ring operations needed by the generic kernels.
pub trait Entry: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
}

impl Entry for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Entry for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// Row-major dense matrix. Entries cannot be modified after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ExactMatrix = Matrix<Rational>;
pub type RadicalMatrix = Matrix<RadicalScalar>;
pub type FloatMatrix = Matrix<f64>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn try_from_fn<E>(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> std::result::Result<T, E>,
    ) -> std::result::Result<Self, E> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("rows have unequal lengths".into()));
        }
        Ok(Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(
        &self,
        f: impl FnMut(&T) -> std::result::Result<U, E>,
    ) -> std::result::Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<std::result::Result<_, _>>()?,
        })
    }

    /// Submatrix on the given (0-based) row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl<T: Entry> Matrix<T> {
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

    /// Matrix product `self · rhs`.
    pub fn mat_mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
            }
            acc
        }))
    }

    /// Entrywise product.
    pub fn hadamard(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("hadamard product needs equal shapes".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.mul(b))
                .collect(),
        })
    }
}

impl ExactMatrix {
    pub fn to_float(&self) -> Result<FloatMatrix> {
        self.try_map(Rational::to_f64)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl RadicalMatrix {
    pub fn to_float(&self) -> Result<FloatMatrix> {
        self.try_map(RadicalScalar::to_f64)
    }
}

/// Product of two radical matrices. Every scalar product must resolve to a
/// rational, otherwise the sum has no representation here and the call fails.
pub fn radical_mat_mul(a: &RadicalMatrix, b: &RadicalMatrix) -> Result<ExactMatrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Matrix::try_from_fn(a.rows, b.cols, |i, j| {
        let mut acc = Rational::zero();
        for k in 0..a.cols {
            match radical_mul(a.get(i, k), b.get(k, j)) {
                RadicalProduct::Rational(q) => acc += q,
                RadicalProduct::Radical(r) => return Err(Error::IrreducibleRadical(r.to_string())),
            }
        }
        Ok(acc)
    })
}

/// A matrix tagged with its scalar kind, as it appears in JSON documents.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Exact(ExactMatrix),
    Radical(RadicalMatrix),
    Float(FloatMatrix),
}

impl AnyMatrix {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyMatrix::Exact(_) => "exact",
            AnyMatrix::Radical(_) => "radical",
            AnyMatrix::Float(_) => "float",
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            AnyMatrix::Exact(m) => m.rows(),
            AnyMatrix::Radical(m) => m.rows(),
            AnyMatrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            AnyMatrix::Exact(m) => m.cols(),
            AnyMatrix::Radical(m) => m.cols(),
            AnyMatrix::Float(m) => m.cols(),
        }
    }

    pub fn as_exact(&self) -> Result<&ExactMatrix> {
        match self {
            AnyMatrix::Exact(m) => Ok(m),
            other => Err(Error::Kind {
                expected: "exact",
                found: other.kind(),
            }),
        }
    }

    pub fn to_float(&self) -> Result<FloatMatrix> {
        match self {
            AnyMatrix::Exact(m) => m.to_float(),
            AnyMatrix::Radical(m) => m.to_float(),
            AnyMatrix::Float(m) => Ok(m.clone()),
        }
    }

    /// Product with kind rules: exact·exact is exact, radical·radical must
    /// resolve to exact, anything involving a float is computed in binary64.
    pub fn mat_mul(&self, rhs: &AnyMatrix) -> Result<AnyMatrix> {
        match (self, rhs) {
            (AnyMatrix::Exact(a), AnyMatrix::Exact(b)) => a.mat_mul(b).map(AnyMatrix::Exact),
            (AnyMatrix::Radical(a), AnyMatrix::Radical(b)) => {
                radical_mat_mul(a, b).map(AnyMatrix::Exact)
            }
            (AnyMatrix::Exact(a), AnyMatrix::Radical(b)) => {
                radical_mat_mul(&a.map(|q| RadicalScalar::from_rational(q.clone())), b)
                    .map(AnyMatrix::Exact)
            }
            (AnyMatrix::Radical(a), AnyMatrix::Exact(b)) => {
                radical_mat_mul(a, &b.map(|q| RadicalScalar::from_rational(q.clone())))
                    .map(AnyMatrix::Exact)
            }
            (a, b) => a.to_float()?.mat_mul(&b.to_float()?).map(AnyMatrix::Float),
        }
    }
}

impl From<ExactMatrix> for AnyMatrix {
    fn from(m: ExactMatrix) -> Self {
        AnyMatrix::Exact(m)
    }
}

impl From<RadicalMatrix> for AnyMatrix {
    fn from(m: RadicalMatrix) -> Self {
        AnyMatrix::Radical(m)
    }
}

impl From<FloatMatrix> for AnyMatrix {
    fn from(m: FloatMatrix) -> Self {
        AnyMatrix::Float(m)
    }
}

/// Parse a row-major literal of rational strings, e.g. `&[&["1", "1/2"]]`.
pub fn exact_from_strs(rows: &[&[&str]]) -> Result<ExactMatrix> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<Rational>>>())
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Integer matrix literal.
pub fn exact_from_ints<const C: usize>(rows: &[[i64; C]]) -> ExactMatrix {
    Matrix::from_fn(rows.len(), C, |i, j| Rational::from_integer(rows[i][j]))
}
