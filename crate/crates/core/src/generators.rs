//! Constructors for the structured matrices: `S = [1 + x_i y_j]` and its
//! Hadamard powers, Cauchy and Vandermonde matrices, and mean matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridOrdering, GridParams};
use crate::matrix::{AnyMatrix, ExactMatrix, FloatMatrix, Matrix};
use crate::scalar::{FloatScalar, Rational};

/// Hadamard exponent: an exact integer gives exact output where possible,
/// a float always gives float output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Integer(i32),
    Float(FloatScalar),
}

impl Exponent {
    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Integer(m) => f64::from(m),
            Exponent::Float(r) => r.get(),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Integer(m) => write!(f, "{m}"),
            Exponent::Float(r) => write!(f, "{r}"),
        }
    }
}

fn one_plus_product(x: &Rational, y: &Rational) -> Rational {
    Rational::one() + x * y
}

/// `S = [1 + x_i y_j]`.
pub fn gen_s(p: &GridParams) -> ExactMatrix {
    let (x, y) = (p.x().values(), p.y().values());
    Matrix::from_fn(p.n(), p.n(), |i, j| one_plus_product(&x[i], &y[j]))
}

/// `S^{∘m} = [(1 + x_i y_j)^m]`.
pub fn gen_s_hadamard_int(p: &GridParams, m: u32) -> ExactMatrix {
    let exp = i32::try_from(m).expect("exponent fits in i32");
    gen_s(p).map(|v| v.pow(exp).expect("nonnegative exponent"))
}

/// `[(1 + x_i y_j)^r]` in binary64; every base must be positive.
pub fn gen_s_hadamard_real(p: &GridParams, r: FloatScalar) -> Result<FloatMatrix> {
    let s = gen_s(p);
    s.try_map(|v| {
        if !v.is_positive() {
            return Err(Error::Domain(format!(
                "entry base 1 + x_i y_j = {v} is not positive"
            )));
        }
        let out = v.to_f64()?.powf(r.get());
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::FloatOverflow(format!("({v})^{r}")))
        }
    })
}

/// Cauchy matrix `[1 / (λ_i + μ_j)]`.
pub fn gen_cauchy(lambda: &Grid, mu: &Grid) -> Result<ExactMatrix> {
    let (l, m) = (lambda.values(), mu.values());
    Matrix::try_from_fn(l.len(), m.len(), |i, j| {
        (&l[i] + &m[j]).recip().map_err(|_| {
            Error::Domain(format!(
                "λ_{} + μ_{} = {} + {} vanishes",
                i + 1,
                j + 1,
                l[i],
                m[j]
            ))
        })
    })
}

/// Vandermonde matrix `[x_i^{j-1}]`, with `0^0 = 1`.
pub fn gen_vandermonde(x: &Grid) -> ExactMatrix {
    let v = x.values();
    let n = v.len();
    Matrix::from_fn(n, n, |i, j| {
        v[i].pow(i32::try_from(j).expect("small dimension")).expect("nonnegative exponent")
    })
}

/// Extended real used for the binomial-mean parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(Rational),
    Infinity,
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInfinity => f.write_str("-inf"),
            ExtendedReal::Finite(q) => write!(f, "{q}"),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(ExtendedReal::Infinity),
            "-inf" | "-infinity" => Ok(ExtendedReal::NegInfinity),
            other => other.parse().map(ExtendedReal::Finite),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Which two-variable mean, and whether its reciprocal is taken.
///
/// With `𝒜` arithmetic, `H` harmonic, `ℋ_ν` Heinz and `ℬ_α` binomial means,
/// the entry at `(i, j)` before the Hadamard power is:
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mean", rename_all = "kebab-case")]
pub enum MeanKind {
    /// `1 / 𝒜(λ_i, λ_j)`
    ArithmeticReciprocal,
    /// `H(λ_i, λ_j)`
    Harmonic,
    /// `1 / ℋ_ν(λ_i, λ_j)`, `ν ∈ [0, 1]`
    HeinzReciprocal { nu: Rational },
    /// `1 / ℬ_α(λ_i, λ_j)`; `α = 0` is the Heinz mean at `ν = 1/2`,
    /// `α = ∞` the maximum, `α = -∞` the minimum.
    BinomialReciprocal { alpha: ExtendedReal },
    /// `ℬ_α(λ_i, λ_j)` itself, used for negative `α`.
    Binomial { alpha: ExtendedReal },
    /// `min(λ_i, λ_j)`
    Min,
    /// `1 / max(λ_i, λ_j)`
    MaxReciprocal,
    /// all ones
    Flat,
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanKind::ArithmeticReciprocal => f.write_str("arithmetic-reciprocal"),
            MeanKind::Harmonic => f.write_str("harmonic"),
            MeanKind::HeinzReciprocal { nu } => write!(f, "heinz-reciprocal(nu={nu})"),
            MeanKind::BinomialReciprocal { alpha } => {
                write!(f, "binomial-reciprocal(alpha={alpha})")
            }
            MeanKind::Binomial { alpha } => write!(f, "binomial(alpha={alpha})"),
            MeanKind::Min => f.write_str("min"),
            MeanKind::MaxReciprocal => f.write_str("max-reciprocal"),
            MeanKind::Flat => f.write_str("flat"),
        }
    }
}

impl MeanKind {
    fn validate(&self) -> Result<()> {
        if let MeanKind::HeinzReciprocal { nu } = self {
            if nu.is_negative() || *nu > Rational::one() {
                return Err(Error::Domain(format!("heinz parameter ν = {nu} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Resolves the binomial conventions at `α ∈ {0, ±∞}`.
    fn canonical(&self) -> MeanKind {
        match self {
            MeanKind::BinomialReciprocal { alpha } => match alpha {
                ExtendedReal::Finite(a) if a.is_zero() => MeanKind::HeinzReciprocal {
                    nu: Rational::new(1, 2).expect("nonzero denominator"),
                },
                ExtendedReal::Infinity => MeanKind::MaxReciprocal,
                _ => self.clone(),
            },
            MeanKind::Binomial { alpha: ExtendedReal::NegInfinity } => MeanKind::Min,
            _ => self.clone(),
        }
    }

    /// Exact entry base (already reciprocal where applicable), when rational.
    fn base_exact(&self, a: &Rational, b: &Rational) -> Option<Rational> {
        let two = Rational::from_integer(2);
        match self {
            MeanKind::ArithmeticReciprocal => (a + b).recip().ok().map(|v| v * &two),
            MeanKind::Harmonic => (&two * a * b).checked_div(&(a + b)).ok(),
            MeanKind::HeinzReciprocal { nu } => {
                let rest = Rational::one() - nu;
                let t1 = a.exact_pow_rational(nu)? * b.exact_pow_rational(&rest)?;
                let t2 = a.exact_pow_rational(&rest)? * b.exact_pow_rational(nu)?;
                two.checked_div(&(t1 + t2)).ok()
            }
            MeanKind::BinomialReciprocal { alpha } | MeanKind::Binomial { alpha } => {
                let reciprocal = matches!(self, MeanKind::BinomialReciprocal { .. });
                let mean = match alpha {
                    ExtendedReal::Infinity => a.max(b).clone(),
                    ExtendedReal::NegInfinity => a.min(b).clone(),
                    ExtendedReal::Finite(al) if al.is_zero() => (a * b).exact_root(2)?,
                    // general α is left to the float path
                    ExtendedReal::Finite(_) => return None,
                };
                if reciprocal {
                    mean.recip().ok()
                } else {
                    Some(mean)
                }
            }
            MeanKind::Min => Some(a.min(b).clone()),
            MeanKind::MaxReciprocal => a.max(b).recip().ok(),
            MeanKind::Flat => Some(Rational::one()),
        }
    }

    fn base_float(&self, a: f64, b: f64) -> f64 {
        match self {
            MeanKind::ArithmeticReciprocal => 2.0 / (a + b),
            MeanKind::Harmonic => 2.0 * a * b / (a + b),
            MeanKind::HeinzReciprocal { nu } => {
                let nu = nu.to_f64().expect("ν in [0, 1]");
                2.0 / (a.powf(nu) * b.powf(1.0 - nu) + a.powf(1.0 - nu) * b.powf(nu))
            }
            MeanKind::BinomialReciprocal { alpha } | MeanKind::Binomial { alpha } => {
                let mean = match alpha {
                    ExtendedReal::Infinity => a.max(b),
                    ExtendedReal::NegInfinity => a.min(b),
                    ExtendedReal::Finite(al) if al.is_zero() => (a * b).sqrt(),
                    ExtendedReal::Finite(al) => {
                        let al = al.to_f64().unwrap_or(f64::NAN);
                        ((a.powf(al) + b.powf(al)) / 2.0).powf(1.0 / al)
                    }
                };
                if matches!(self, MeanKind::BinomialReciprocal { .. }) {
                    1.0 / mean
                } else {
                    mean
                }
            }
            MeanKind::Min => a.min(b),
            MeanKind::MaxReciprocal => 1.0 / a.max(b),
            MeanKind::Flat => 1.0,
        }
    }
}

/// Mean matrix on a strictly increasing positive grid, raised entrywise to
/// `r`. The result is exact when `r` is an integer and every base is
/// rational; otherwise it is computed in binary64.
pub fn gen_mean(kind: &MeanKind, lambda: &Grid, r: Exponent) -> Result<AnyMatrix> {
    lambda.require(GridOrdering::StrictlyIncreasingPositive)?;
    kind.validate()?;
    let kind = kind.canonical();
    let n = lambda.len();
    let l = lambda.values();

    if let Exponent::Integer(m) = r {
        let exact = Matrix::try_from_fn(n, n, |i, j| {
            kind.base_exact(&l[i], &l[j]).ok_or(())?.pow(m).map_err(|_| ())
        });
        if let Ok(exact) = exact {
            return Ok(AnyMatrix::Exact(exact));
        }
    }

    let lf = lambda.to_f64()?;
    let rf = r.as_f64();
    let m = FloatMatrix::try_from_fn(n, n, |i, j| {
        let v = kind.base_float(lf[i], lf[j]).powf(rf);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("{kind} entry ({}, {}) is not finite", i + 1, j + 1)))
        }
    })?;
    Ok(AnyMatrix::Float(m))
}
