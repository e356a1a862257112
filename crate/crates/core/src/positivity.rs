//! TP_k / TN_k certification by exhaustive minor enumeration, plus the rank
//! law and exponent-threshold experiments for Hadamard powers of `S`.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gen_mean, gen_s_hadamard_int, gen_s_hadamard_real, Exponent, ExtendedReal, MeanKind};
use crate::grid::{Grid, GridOrdering, GridParams};
use crate::matrix::{
    classify_float_minor, hadamard_scale, minor_exact, minor_float, rank_exact, AnyMatrix,
    ExactMatrix, FloatMatrix, FloatSign, MinorSpec, MinorValue,
};
use crate::scalar::{FloatScalar, Rational};

/// Largest dimension checked without an explicit override.
pub const DEFAULT_MAX_N: usize = 10;

/// Default relative tolerance for float minors.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "TP")]
    Tp,
    #[serde(rename = "TN")]
    Tn,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    /// A minor counts as zero when `|minor| ≤ tol · scale`, where `scale` is
    /// the product of the row sup-norms of the submatrix.
    Float { tol: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(flatten)]
    pub minor: MinorSpec,
    pub value: MinorValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// The value sits inside the zero band, so its sign is not certified.
    pub near_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails { witness: Witness },
    /// No definite violation, but some minor evaluated to a non-finite value.
    Indeterminate { witness: Witness },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityVerdict {
    pub property: Property,
    pub k: usize,
    #[serde(flatten)]
    pub mode: Mode,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub minors_checked: usize,
    /// Float minors inside the `tol · scale` band.
    pub indeterminate_count: usize,
}

impl PositivityVerdict {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self.verdict, Verdict::Fails { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.verdict {
            Verdict::Holds => None,
            Verdict::Fails { witness } | Verdict::Indeterminate { witness } => Some(witness),
        }
    }
}

/// All minors of orders `1..=k` of an `rows×cols` matrix: by increasing
/// order, then lexicographically by row set, then by column set.
pub fn minor_specs(rows: usize, cols: usize, k: usize) -> Vec<MinorSpec> {
    let mut out = Vec::new();
    for order in 1..=k.min(rows).min(cols) {
        let col_sets: Vec<Vec<usize>> = (0..cols).combinations(order).collect();
        for r in (0..rows).combinations(order) {
            for c in &col_sets {
                out.push(MinorSpec::new(r.clone(), c.clone()).expect("combinations are increasing"));
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    /// Passes, but inside the zero band.
    PassNearZero,
    Fail,
    FailNearZero,
    Undefined,
}

fn judge_exact(property: Property, v: &Rational) -> Outcome {
    let ok = match property {
        Property::Tp => v.is_positive(),
        Property::Tn => !v.is_negative(),
    };
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn judge_float(property: Property, sign: FloatSign) -> Outcome {
    match (property, sign) {
        (_, FloatSign::Positive) => Outcome::Pass,
        (_, FloatSign::Negative) => Outcome::Fail,
        (_, FloatSign::Undefined) => Outcome::Undefined,
        (Property::Tp, FloatSign::NearZero) => Outcome::FailNearZero,
        (Property::Tn, FloatSign::NearZero) => Outcome::PassNearZero,
    }
}

enum Prepared<'a> {
    Exact(&'a ExactMatrix),
    Float(FloatMatrix, f64),
}

/// Checks TP_k or TN_k. `allow_large` lifts the dimension cap.
pub fn check_positivity(
    a: &AnyMatrix,
    property: Property,
    k: usize,
    mode: Mode,
    allow_large: bool,
) -> Result<PositivityVerdict> {
    let (rows, cols) = (a.rows(), a.cols());
    let max = rows.min(cols);
    if k == 0 || k > max {
        return Err(Error::OrderOutOfRange { k, max });
    }
    if rows.max(cols) > DEFAULT_MAX_N && !allow_large {
        return Err(Error::TooLarge { n: rows.max(cols), cap: DEFAULT_MAX_N });
    }
    let prepared = match mode {
        Mode::Exact => Prepared::Exact(a.as_exact()?),
        Mode::Float { tol } => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Error::Domain(format!("tolerance {tol} must be finite and nonnegative")));
            }
            Prepared::Float(a.to_float()?, tol)
        }
    };
    let specs = minor_specs(rows, cols, k);
    let evaluated: Vec<(Outcome, MinorValue, Option<f64>)> = specs
        .par_iter()
        .map(|spec| match &prepared {
            Prepared::Exact(m) => {
                let v = minor_exact(m, spec).expect("spec within bounds");
                (judge_exact(property, &v), MinorValue::Exact(v), None)
            }
            Prepared::Float(m, tol) => {
                let v = minor_float(m, spec).expect("spec within bounds");
                let scale = hadamard_scale(m, spec);
                let sign = classify_float_minor(v, scale, *tol);
                (judge_float(property, sign), MinorValue::Float(v), Some(scale))
            }
        })
        .collect();

    let indeterminate_count = evaluated
        .iter()
        .filter(|(o, ..)| matches!(o, Outcome::PassNearZero | Outcome::FailNearZero))
        .count();
    let witness_at = |idx: usize| {
        let (o, value, scale) = &evaluated[idx];
        Witness {
            minor: specs[idx].clone(),
            value: value.clone(),
            scale: *scale,
            near_zero: matches!(o, Outcome::FailNearZero),
        }
    };
    let first_fail = evaluated
        .iter()
        .position(|(o, ..)| matches!(o, Outcome::Fail | Outcome::FailNearZero));
    let first_undefined = evaluated.iter().position(|(o, ..)| *o == Outcome::Undefined);
    let verdict = match (first_fail, first_undefined) {
        (Some(i), _) => Verdict::Fails { witness: witness_at(i) },
        (None, Some(i)) => Verdict::Indeterminate { witness: witness_at(i) },
        (None, None) => Verdict::Holds,
    };
    Ok(PositivityVerdict {
        property,
        k,
        mode,
        verdict,
        minors_checked: specs.len(),
        indeterminate_count,
    })
}

/// TP_k check with the default dimension cap.
pub fn check_tp(a: &AnyMatrix, k: usize, mode: Mode) -> Result<PositivityVerdict> {
    check_positivity(a, Property::Tp, k, mode, false)
}

/// TN_k check with the default dimension cap.
pub fn check_tn(a: &AnyMatrix, k: usize, mode: Mode) -> Result<PositivityVerdict> {
    check_positivity(a, Property::Tn, k, mode, false)
}

/// Exact rank of `S^{∘m}` for `0 ≤ m ≤ n−2`; the expected value is `m + 1`.
pub fn rank_of_hadamard_power(p: &GridParams, m: u32) -> Result<usize> {
    p.require(GridOrdering::StrictlyIncreasing)?;
    let n = p.n();
    if n < 2 || m as usize > n - 2 {
        return Err(Error::Domain(format!(
            "m = {m} is outside 0..=n-2 for n = {n}"
        )));
    }
    Ok(rank_exact(&gen_s_hadamard_int(p, m)))
}

/// What the exponent threshold predicts for `S^{∘r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// totally positive
    Tp,
    /// totally nonnegative but not totally positive
    TnNotTp,
    /// not totally nonnegative
    NotTn,
    /// no prediction
    Unclaimed,
}

impl Expectation {
    /// Whether the computed pair of verdicts agrees with the prediction;
    /// `None` when nothing is predicted.
    pub fn agrees(self, tp: &PositivityVerdict, tn: &PositivityVerdict) -> Option<bool> {
        match self {
            Expectation::Tp => Some(tp.holds()),
            Expectation::TnNotTp => Some(tn.holds() && tp.fails()),
            Expectation::NotTn => Some(tn.fails()),
            Expectation::Unclaimed => None,
        }
    }
}

/// Prediction for `S^{∘r}` of order `n` with increasing positive grids.
pub fn threshold_expectation(n: usize, r: f64) -> Expectation {
    let boundary = n as f64 - 2.0;
    if r > boundary {
        Expectation::Tp
    } else if r >= 0.0 && r.fract() == 0.0 {
        Expectation::TnNotTp
    } else if r > 0.0 {
        Expectation::NotTn
    } else {
        Expectation::Unclaimed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdSample {
    pub exponent: f64,
    pub expectation: Expectation,
    pub tp: PositivityVerdict,
    pub tn: PositivityVerdict,
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdScanReport {
    pub x: Grid,
    pub y: Grid,
    pub n: usize,
    pub k: usize,
    /// `n − 2`
    pub claimed_boundary: i64,
    /// Sorted by exponent.
    pub samples: Vec<ThresholdSample>,
}

/// Float TP_k / TN_k verdicts of `S^{∘r}` for each sampled exponent.
pub fn scan_hadamard_threshold(
    p: &GridParams,
    exponents: &[f64],
    k: usize,
    tol: f64,
) -> Result<ThresholdScanReport> {
    p.require(GridOrdering::StrictlyIncreasingPositive)?;
    let n = p.n();
    let mut sorted: Vec<f64> = exponents.to_vec();
    if let Some(bad) = sorted.iter().find(|r| !r.is_finite() || **r < 0.0) {
        return Err(Error::Domain(format!("exponent {bad} must be finite and nonnegative")));
    }
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mode = Mode::Float { tol };
    let samples = sorted
        .into_iter()
        .map(|r| {
            let a: AnyMatrix = gen_s_hadamard_real(p, FloatScalar::new(r)?)?.into();
            let tp = check_tp(&a, k, mode)?;
            let tn = check_tn(&a, k, mode)?;
            let expectation = threshold_expectation(n, r);
            Ok(ThresholdSample {
                exponent: r,
                expectation,
                agrees: expectation.agrees(&tp, &tn),
                tp,
                tn,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ThresholdScanReport {
        x: p.x().clone(),
        y: p.y().clone(),
        n,
        k,
        claimed_boundary: n as i64 - 2,
        samples,
    })
}

/// Prediction for a mean matrix raised to a positive power.
pub fn mean_expectation(kind: &MeanKind) -> Expectation {
    let half = Rational::new(1, 2).expect("nonzero denominator");
    match kind {
        MeanKind::ArithmeticReciprocal | MeanKind::Harmonic => Expectation::Tp,
        MeanKind::HeinzReciprocal { nu } if *nu == half => Expectation::TnNotTp,
        MeanKind::HeinzReciprocal { .. } => Expectation::Tp,
        MeanKind::BinomialReciprocal { alpha } => match alpha {
            ExtendedReal::Finite(a) if a.is_zero() => Expectation::TnNotTp,
            ExtendedReal::Finite(a) if a.is_positive() => Expectation::Tp,
            ExtendedReal::Infinity => Expectation::TnNotTp,
            _ => Expectation::Unclaimed,
        },
        MeanKind::Binomial { alpha } => match alpha {
            ExtendedReal::Finite(a) if a.is_negative() => Expectation::Tp,
            ExtendedReal::NegInfinity => Expectation::TnNotTp,
            _ => Expectation::Unclaimed,
        },
        MeanKind::Min | MeanKind::MaxReciprocal | MeanKind::Flat => Expectation::TnNotTp,
    }
}

/// The mean families with a stated TP or TN prediction.
pub fn standard_mean_kinds() -> Vec<MeanKind> {
    let q = |p, d| Rational::new(p, d).expect("nonzero denominator");
    let mut kinds = vec![MeanKind::ArithmeticReciprocal, MeanKind::Harmonic];
    for nu in [q(0, 1), q(3, 10), q(1, 1), q(1, 2)] {
        kinds.push(MeanKind::HeinzReciprocal { nu });
    }
    for a in [q(1, 2), q(1, 1), q(3, 1)] {
        kinds.push(MeanKind::BinomialReciprocal { alpha: ExtendedReal::Finite(a) });
    }
    for a in [q(1, 2), q(1, 1), q(3, 1)] {
        kinds.push(MeanKind::Binomial { alpha: ExtendedReal::Finite(-a) });
    }
    kinds.push(MeanKind::BinomialReciprocal { alpha: ExtendedReal::Finite(q(0, 1)) });
    kinds.push(MeanKind::BinomialReciprocal { alpha: ExtendedReal::Infinity });
    kinds.push(MeanKind::Binomial { alpha: ExtendedReal::NegInfinity });
    kinds
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanRow {
    pub family: String,
    pub expectation: Expectation,
    pub tp: PositivityVerdict,
    pub tn: PositivityVerdict,
    pub agrees: Option<bool>,
}

/// TP_k and TN_k verdicts for each mean family at exponent `r > 0`.
pub fn check_mean_matrices(
    lambda: &Grid,
    r: Exponent,
    k: usize,
    mode: Mode,
    kinds: &[MeanKind],
) -> Result<Vec<MeanRow>> {
    lambda.require(GridOrdering::StrictlyIncreasingPositive)?;
    if !(r.as_f64() > 0.0) {
        return Err(Error::Domain(format!("exponent {r} must be positive")));
    }
    kinds
        .iter()
        .map(|kind| {
            let a = gen_mean(kind, lambda, r)?;
            let tp = check_tp(&a, k, mode)?;
            let tn = check_tn(&a, k, mode)?;
            let expectation = mean_expectation(kind);
            Ok(MeanRow {
                family: kind.to_string(),
                expectation,
                agrees: expectation.agrees(&tp, &tn),
                tp,
                tn,
            })
        })
        .collect()
}
