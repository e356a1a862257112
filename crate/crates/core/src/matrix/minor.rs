use serde::{Deserialize, Serialize};

use super::det::{det_exact, det_float};
use super::{AnyMatrix, ExactMatrix, FloatMatrix, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Row and column index sets of a square submatrix.
///
/// Indices are 0-based in memory and 1-based in JSON and `Display`, matching
/// the usual mathematical convention in reports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OneBased", into = "OneBased")]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct OneBased {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl From<MinorSpec> for OneBased {
    fn from(m: MinorSpec) -> Self {
        OneBased {
            rows: m.rows.iter().map(|i| i + 1).collect(),
            cols: m.cols.iter().map(|j| j + 1).collect(),
        }
    }
}

impl TryFrom<OneBased> for MinorSpec {
    type Error = Error;

    fn try_from(o: OneBased) -> Result<Self> {
        let shift = |v: Vec<usize>| -> Result<Vec<usize>> {
            v.into_iter()
                .map(|i| i.checked_sub(1).ok_or_else(|| Error::Minor("indices are 1-based".into())))
                .collect()
        };
        MinorSpec::new(shift(o.rows)?, shift(o.cols)?)
    }
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::Minor(format!(
                "need equal nonempty index lists, got {} rows and {} cols",
                rows.len(),
                cols.len()
            )));
        }
        if !strictly_increasing(&rows) || !strictly_increasing(&cols) {
            return Err(Error::Minor("indices must be strictly increasing".into()));
        }
        Ok(MinorSpec { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn check_bounds(&self, rows: usize, cols: usize) -> Result<()> {
        let r = *self.rows.last().expect("nonempty");
        let c = *self.cols.last().expect("nonempty");
        if r >= rows || c >= cols {
            return Err(Error::Minor(format!(
                "selection {self} exceeds a {rows}x{cols} matrix"
            )));
        }
        Ok(())
    }

    fn submatrix<T: Clone>(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_bounds(a.rows(), a.cols())?;
        Ok(a.select(&self.rows, &self.cols))
    }
}

impl std::fmt::Display for MinorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let one = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "rows {{{}}} cols {{{}}}", one(&self.rows), one(&self.cols))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MinorValue {
    Exact(Rational),
    Float(f64),
}

pub fn minor_exact(a: &ExactMatrix, spec: &MinorSpec) -> Result<Rational> {
    det_exact(&spec.submatrix(a)?)
}

pub fn minor_float(a: &FloatMatrix, spec: &MinorSpec) -> Result<f64> {
    det_float(&spec.submatrix(a)?)
}

/// Minor of an exact or float matrix. Radical matrices have no exact
/// determinant here and are rejected.
pub fn minor(a: &AnyMatrix, spec: &MinorSpec) -> Result<MinorValue> {
    match a {
        AnyMatrix::Exact(m) => minor_exact(m, spec).map(MinorValue::Exact),
        AnyMatrix::Float(m) => minor_float(m, spec).map(MinorValue::Float),
        AnyMatrix::Radical(_) => Err(Error::Kind {
            expected: "exact or float",
            found: "radical",
        }),
    }
}

/// Product of the row sup-norms of the selected submatrix; bounds the
/// magnitude of its determinant up to a dimension factor.
pub fn hadamard_scale(a: &FloatMatrix, spec: &MinorSpec) -> f64 {
    spec.rows
        .iter()
        .map(|&i| spec.cols.iter().map(|&j| a.get(i, j).abs()).fold(0.0, f64::max))
        .product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloatSign {
    Positive,
    Negative,
    /// Within `tol·scale` of zero: neither sign can be certified.
    NearZero,
    /// The computed value is not finite.
    Undefined,
}

pub fn classify_float_minor(value: f64, scale: f64, tol: f64) -> FloatSign {
    if !value.is_finite() || !scale.is_finite() {
        return FloatSign::Undefined;
    }
    let band = tol * scale;
    if value > band {
        FloatSign::Positive
    } else if value < -band {
        FloatSign::Negative
    } else {
        FloatSign::NearZero
    }
}
