//! Bidiagonal factors, factorization certificates, and their verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gen_s, gen_s_hadamard_int, gen_vandermonde};
use crate::grid::{Grid, GridParams};
use crate::matrix::{AnyMatrix, ExactMatrix, FloatMatrix, Matrix};
use crate::scalar::Rational;

/// One factor of an ordered product.
///
/// Elementary indices follow the `L_i(s)` / `U_i(s)` convention: `i` is
/// 1-based with `2 ≤ i ≤ n`, and the single off-diagonal entry sits at
/// `(i, i-1)` for lower and `(i-1, i)` for upper factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum Factor {
    #[serde(rename = "elem-lower")]
    ElementaryLower { i: usize, s: Rational },
    #[serde(rename = "elem-upper")]
    ElementaryUpper { i: usize, s: Rational },
    #[serde(rename = "diag")]
    Diagonal { d: Vec<Rational> },
    /// `diag[k]` on the diagonal, `sub[k]` at `(k+2, k+1)` (1-based).
    #[serde(rename = "gen-lower")]
    GeneralLower { diag: Vec<Rational>, sub: Vec<Rational> },
    /// `diag[k]` on the diagonal, `sup[k]` at `(k+1, k+2)` (1-based).
    #[serde(rename = "gen-upper")]
    GeneralUpper {
        diag: Vec<Rational>,
        #[serde(rename = "super")]
        sup: Vec<Rational>,
    },
    /// A full matrix; used for triangular factors that are not bidiagonal and
    /// for the irrational display form of the LU factors of `S`.
    #[serde(rename = "dense")]
    Dense { matrix: AnyMatrix },
}

impl Factor {
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Dimension(msg));
        match self {
            Factor::ElementaryLower { i, .. } | Factor::ElementaryUpper { i, .. } => {
                if *i < 2 || *i > n {
                    return bad(format!("elementary index {i} outside 2..={n}"));
                }
            }
            Factor::Diagonal { d } => {
                if d.len() != n {
                    return bad(format!("diagonal has {} entries, expected {n}", d.len()));
                }
            }
            Factor::GeneralLower { diag, sub: off } | Factor::GeneralUpper { diag, sup: off } => {
                if diag.len() != n || off.len() + 1 != n.max(1) {
                    return bad(format!(
                        "bidiagonal factor has {} diagonal and {} off-diagonal entries for n = {n}",
                        diag.len(),
                        off.len()
                    ));
                }
            }
            Factor::Dense { matrix } => {
                if matrix.rows() != n || matrix.cols() != n {
                    return bad(format!(
                        "dense factor is {}x{}, expected {n}x{n}",
                        matrix.rows(),
                        matrix.cols()
                    ));
                }
            }
        }
        Ok(())
    }

    /// Every rational parameter the factor carries. Dense radical factors
    /// contribute nothing.
    pub fn parameters(&self) -> Vec<&Rational> {
        match self {
            Factor::ElementaryLower { s, .. } | Factor::ElementaryUpper { s, .. } => vec![s],
            Factor::Diagonal { d } => d.iter().collect(),
            Factor::GeneralLower { diag, sub: off } | Factor::GeneralUpper { diag, sup: off } => {
                diag.iter().chain(off).collect()
            }
            Factor::Dense { matrix } => match matrix {
                AnyMatrix::Exact(m) => m.entries().iter().collect(),
                _ => Vec::new(),
            },
        }
    }

    /// Dense `n×n` exact matrix of this factor.
    pub fn to_exact(&self, n: usize) -> Result<ExactMatrix> {
        self.validate(n)?;
        let zero = Rational::zero;
        Ok(match self {
            Factor::ElementaryLower { i, s } => Matrix::from_fn(n, n, |r, c| {
                if r == c {
                    Rational::one()
                } else if r + 1 == *i && c + 2 == *i {
                    s.clone()
                } else {
                    zero()
                }
            }),
            Factor::ElementaryUpper { i, s } => Matrix::from_fn(n, n, |r, c| {
                if r == c {
                    Rational::one()
                } else if r + 2 == *i && c + 1 == *i {
                    s.clone()
                } else {
                    zero()
                }
            }),
            Factor::Diagonal { d } => ExactMatrix::diagonal(d),
            Factor::GeneralLower { diag, sub } => Matrix::from_fn(n, n, |r, c| {
                if r == c {
                    diag[r].clone()
                } else if r == c + 1 {
                    sub[c].clone()
                } else {
                    zero()
                }
            }),
            Factor::GeneralUpper { diag, sup } => Matrix::from_fn(n, n, |r, c| {
                if r == c {
                    diag[r].clone()
                } else if c == r + 1 {
                    sup[r].clone()
                } else {
                    zero()
                }
            }),
            Factor::Dense { matrix } => matrix.as_exact()?.clone(),
        })
    }

    /// `self · a` computed with row operations where the factor is sparse.
    pub fn apply_left(&self, a: &ExactMatrix) -> Result<ExactMatrix> {
        let n = a.rows();
        self.validate(n)?;
        let rows = a.to_rows();
        let axpy = |dst: &[Rational], s: &Rational, src: &[Rational]| -> Vec<Rational> {
            dst.iter().zip(src).map(|(d, v)| d + s * v).collect()
        };
        let scale = |s: &Rational, row: &[Rational]| -> Vec<Rational> {
            row.iter().map(|v| s * v).collect()
        };
        let out: Vec<Vec<Rational>> = match self {
            Factor::ElementaryLower { i, s } => {
                let mut out = rows.clone();
                // row i += s · row (i-1)
                out[i - 1] = axpy(&rows[i - 1], s, &rows[i - 2]);
                out
            }
            Factor::ElementaryUpper { i, s } => {
                let mut out = rows.clone();
                // row (i-1) += s · row i
                out[i - 2] = axpy(&rows[i - 2], s, &rows[i - 1]);
                out
            }
            Factor::Diagonal { d } => rows.iter().zip(d).map(|(r, s)| scale(s, r)).collect(),
            Factor::GeneralLower { diag, sub } => (0..n)
                .map(|r| {
                    let own = scale(&diag[r], &rows[r]);
                    if r == 0 {
                        own
                    } else {
                        axpy(&own, &sub[r - 1], &rows[r - 1])
                    }
                })
                .collect(),
            Factor::GeneralUpper { diag, sup } => (0..n)
                .map(|r| {
                    let own = scale(&diag[r], &rows[r]);
                    if r + 1 == n {
                        own
                    } else {
                        axpy(&own, &sup[r], &rows[r + 1])
                    }
                })
                .collect(),
            Factor::Dense { matrix } => return matrix.as_exact()?.mat_mul(a),
        };
        Matrix::from_rows(out)
    }

    pub fn transpose(&self) -> Factor {
        match self {
            Factor::ElementaryLower { i, s } => Factor::ElementaryUpper { i: *i, s: s.clone() },
            Factor::ElementaryUpper { i, s } => Factor::ElementaryLower { i: *i, s: s.clone() },
            Factor::Diagonal { d } => Factor::Diagonal { d: d.clone() },
            Factor::GeneralLower { diag, sub } => Factor::GeneralUpper {
                diag: diag.clone(),
                sup: sub.clone(),
            },
            Factor::GeneralUpper { diag, sup } => Factor::GeneralLower {
                diag: diag.clone(),
                sub: sup.clone(),
            },
            Factor::Dense { matrix } => Factor::Dense {
                matrix: match matrix {
                    AnyMatrix::Exact(m) => AnyMatrix::Exact(m.transpose()),
                    AnyMatrix::Radical(m) => AnyMatrix::Radical(m.transpose()),
                    AnyMatrix::Float(m) => AnyMatrix::Float(m.transpose()),
                },
            },
        }
    }

    fn to_float(&self, n: usize) -> Result<FloatMatrix> {
        match self {
            Factor::Dense { matrix } => {
                self.validate(n)?;
                matrix.to_float()
            }
            other => other.to_exact(n)?.to_float(),
        }
    }
}

/// What a certificate claims to factor. The target can always be
/// regenerated from this description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Target {
    /// `S = [1 + x_i y_j]`
    #[serde(rename = "S")]
    S { x: Grid, y: Grid },
    /// `S^{∘m}`
    #[serde(rename = "S-pow")]
    SPow { x: Grid, y: Grid, m: u32 },
    #[serde(rename = "vandermonde")]
    Vandermonde { x: Grid },
    /// `[min(μ_i, μ_j)]`
    #[serde(rename = "min")]
    Min { mu: Grid },
    /// An explicit matrix.
    #[serde(rename = "matrix")]
    Matrix { matrix: AnyMatrix },
}

impl Target {
    pub fn s(p: &GridParams) -> Self {
        Target::S {
            x: p.x().clone(),
            y: p.y().clone(),
        }
    }

    pub fn s_pow(p: &GridParams, m: u32) -> Self {
        Target::SPow {
            x: p.x().clone(),
            y: p.y().clone(),
            m,
        }
    }

    pub fn materialize(&self) -> Result<AnyMatrix> {
        Ok(match self {
            Target::S { x, y } => gen_s(&GridParams::new(x.clone(), y.clone())?).into(),
            Target::SPow { x, y, m } => {
                gen_s_hadamard_int(&GridParams::new(x.clone(), y.clone())?, *m).into()
            }
            Target::Vandermonde { x } => gen_vandermonde(x).into(),
            Target::Min { mu } => {
                let v = mu.values();
                ExactMatrix::from_fn(v.len(), v.len(), |i, j| v[i].clone().min(v[j].clone())).into()
            }
            Target::Matrix { matrix } => matrix.clone(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Rational factors; the product must equal the target exactly.
    Exact,
    /// Irrational display factors, backed by an exact `squared_form`.
    RadicalDisplay,
}

/// An ordered product of factors claimed to equal a target matrix.
/// Factor order is significant: the product is `factors[0] · factors[1] · …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCertificate {
    pub target: Target,
    pub n: usize,
    pub kind: CertificateKind,
    pub factors: Vec<Factor>,
    /// Exact companion product for radical-display certificates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squared_form: Option<Vec<Factor>>,
}

/// Multiplies factors left to right, starting from the `n×n` identity.
pub fn exact_product(factors: &[Factor], n: usize) -> Result<ExactMatrix> {
    factors
        .iter()
        .rev()
        .try_fold(ExactMatrix::identity(n), |acc, f| f.apply_left(&acc))
}

fn float_product(factors: &[Factor], n: usize) -> Result<FloatMatrix> {
    factors
        .iter()
        .try_fold(FloatMatrix::identity(n), |acc, f| acc.mat_mul(&f.to_float(n)?))
}

impl FactorizationCertificate {
    pub fn exact(target: Target, n: usize, factors: Vec<Factor>) -> Self {
        FactorizationCertificate {
            target,
            n,
            kind: CertificateKind::Exact,
            factors,
            squared_form: None,
        }
    }

    /// Exact product of the factors (or of the squared form for display
    /// certificates).
    pub fn product(&self) -> Result<ExactMatrix> {
        match self.kind {
            CertificateKind::Exact => exact_product(&self.factors, self.n),
            CertificateKind::RadicalDisplay => {
                let sq = self.squared_form.as_ref().ok_or_else(|| {
                    Error::Precondition("radical-display certificate lacks a squared form".into())
                })?;
                exact_product(sq, self.n)
            }
        }
    }

    /// All rational parameters in certificate order.
    pub fn parameters(&self) -> Vec<&Rational> {
        self.factors.iter().flat_map(Factor::parameters).collect()
    }
}

/// Relative tolerance for float comparison of display certificates.
pub const DISPLAY_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum VerificationReport {
    ExactEqual,
    /// First differing entry in row-major order (1-based indices).
    Mismatch {
        row: usize,
        col: usize,
        expected: String,
        found: String,
    },
    /// Display factors match in binary64 and the squared form matches
    /// exactly.
    FloatEqual {
        max_abs_deviation: f64,
        max_rel_deviation: f64,
        squared_form: &'static str,
    },
}

impl VerificationReport {
    pub fn is_success(&self) -> bool {
        !matches!(self, VerificationReport::Mismatch { .. })
    }
}

fn first_exact_mismatch(product: &ExactMatrix, target: &ExactMatrix) -> Option<VerificationReport> {
    for i in 0..target.rows() {
        for j in 0..target.cols() {
            if product.get(i, j) != target.get(i, j) {
                return Some(VerificationReport::Mismatch {
                    row: i + 1,
                    col: j + 1,
                    expected: target.get(i, j).to_string(),
                    found: product.get(i, j).to_string(),
                });
            }
        }
    }
    None
}

/// Materializes the certificate's factors, multiplies them in order and
/// compares the result with `target`.
pub fn verify_certificate(
    cert: &FactorizationCertificate,
    target: &AnyMatrix,
) -> Result<VerificationReport> {
    if target.rows() != cert.n || target.cols() != cert.n {
        return Err(Error::Dimension(format!(
            "certificate is {n}x{n} but target is {}x{}",
            target.rows(),
            target.cols(),
            n = cert.n
        )));
    }
    let exact_target = target.as_exact()?;
    match cert.kind {
        CertificateKind::Exact => {
            let product = exact_product(&cert.factors, cert.n)?;
            Ok(first_exact_mismatch(&product, exact_target).unwrap_or(VerificationReport::ExactEqual))
        }
        CertificateKind::RadicalDisplay => {
            let float_target = exact_target.to_float()?;
            let display = float_product(&cert.factors, cert.n)?;
            let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
            let mut worst = None;
            for i in 0..cert.n {
                for j in 0..cert.n {
                    let (t, f) = (*float_target.get(i, j), *display.get(i, j));
                    let abs = (t - f).abs();
                    let rel = if t == 0.0 { abs } else { abs / t.abs() };
                    max_abs = max_abs.max(abs);
                    if rel > max_rel {
                        max_rel = rel;
                        worst = Some((i, j, t, f));
                    }
                }
            }
            if max_rel > DISPLAY_REL_TOL {
                let (i, j, t, f) = worst.expect("positive deviation has a location");
                return Ok(VerificationReport::Mismatch {
                    row: i + 1,
                    col: j + 1,
                    expected: t.to_string(),
                    found: f.to_string(),
                });
            }
            let squared = cert.product()?;
            if let Some(m) = first_exact_mismatch(&squared, exact_target) {
                return Ok(m);
            }
            Ok(VerificationReport::FloatEqual {
                max_abs_deviation: max_abs,
                max_rel_deviation: max_rel,
                squared_form: "exact-equal",
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::exact_from_ints;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn elementary_shapes() {
        let l = Factor::ElementaryLower { i: 3, s: q("4/3") }.to_exact(3).unwrap();
        assert_eq!(l.get(2, 1), &q("4/3"));
        assert_eq!(l.entries().iter().filter(|v| !v.is_zero()).count(), 4);
        let u = Factor::ElementaryUpper { i: 2, s: q("5") }.to_exact(3).unwrap();
        assert_eq!(u.get(0, 1), &q("5"));
        assert!(Factor::ElementaryLower { i: 1, s: q("1") }.validate(3).is_err());
        assert!(Factor::ElementaryLower { i: 4, s: q("1") }.validate(3).is_err());
        assert!(Factor::Diagonal { d: vec![q("1")] }.validate(2).is_err());
    }

    #[test]
    fn row_operations_match_dense_products() {
        let a = exact_from_ints(&[[1, 2, 3], [4, 5, 6], [7, 8, 10]]);
        let factors = [
            Factor::ElementaryLower { i: 2, s: q("3/2") },
            Factor::ElementaryUpper { i: 3, s: q("-2") },
            Factor::Diagonal { d: vec![q("2"), q("1/2"), q("0")] },
            Factor::GeneralLower { diag: vec![q("1"), q("2"), q("3")], sub: vec![q("5"), q("7")] },
            Factor::GeneralUpper { diag: vec![q("1"), q("2"), q("3")], sup: vec![q("5"), q("7")] },
        ];
        for f in &factors {
            let dense = f.to_exact(3).unwrap().mat_mul(&a).unwrap();
            assert_eq!(f.apply_left(&a).unwrap(), dense, "{f:?}");
            assert_eq!(f.transpose().to_exact(3).unwrap(), f.to_exact(3).unwrap().transpose());
        }
    }

    #[test]
    fn empty_product_is_identity() {
        assert_eq!(exact_product(&[], 1).unwrap(), exact_from_ints(&[[1]]));
    }

    #[test]
    fn json_forms() {
        let f = Factor::ElementaryLower { i: 3, s: q("4/3") };
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"form":"elem-lower","i":3,"s":"4/3"}"#
        );
        let g = Factor::GeneralUpper { diag: vec![q("1"), q("2")], sup: vec![q("1/2")] };
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"form":"gen-upper","diag":["1","2"],"super":["1/2"]}"#
        );
        let d = Factor::Diagonal { d: vec![q("2"), q("1/2"), q("0")] };
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"form":"diag","d":["2","1/2","0"]}"#);
    }
}
