//! Explicit bidiagonal factorizations of `S`, its integer Hadamard powers,
//! Vandermonde and min matrices, and a generic Neville elimination.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{exact_product, Factor, FactorizationCertificate, Target};
use crate::generators::gen_s;
use crate::grid::{Grid, GridOrdering, GridParams};
use crate::matrix::{radical_mat_mul, AnyMatrix, ExactMatrix, Matrix, RadicalMatrix};
use crate::scalar::{RadicalScalar, Rational};

fn one() -> Rational {
    Rational::one()
}

/// `1 + a·b`
fn one_plus(a: &Rational, b: &Rational) -> Rational {
    one() + a * b
}

fn ratio(num: Rational, den: Rational) -> Result<Rational> {
    num.checked_div(&den)
}

fn need_two(p: &GridParams) -> Result<usize> {
    let n = p.n();
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n}; at least two nodes are required")));
    }
    Ok(n)
}

/// Rejects grids violating the nonvanishing conditions the closed forms
/// divide by, naming the first offending index (1-based).
pub fn check_nonvanishing(p: &GridParams) -> Result<()> {
    let (x, y) = (p.x().values(), p.y().values());
    for (j, yj) in y.iter().enumerate() {
        if one_plus(&x[0], yj).is_zero() {
            return Err(Error::Precondition(format!("1 + x_1 y_{} = 0", j + 1)));
        }
    }
    for (i, xi) in x.iter().enumerate() {
        if one_plus(xi, &y[0]).is_zero() {
            return Err(Error::Precondition(format!("1 + x_{} y_1 = 0", i + 1)));
        }
    }
    for i in 1..p.n() {
        if x[i] == x[i - 1] {
            return Err(Error::Precondition(format!("x_{} = x_{}", i + 1, i)));
        }
        if y[i] == y[i - 1] {
            return Err(Error::Precondition(format!("y_{} = y_{}", i + 1, i)));
        }
    }
    Ok(())
}

/// `L` and `U` with nonzero columns (rows) 1 and 2 only, whose product is
/// `S`. Entries are irrational in general, so both factors carry radicals.
pub fn lu_of_s(p: &GridParams) -> Result<(RadicalMatrix, RadicalMatrix)> {
    let n = need_two(p)?;
    let (x, y) = (p.x().values(), p.y().values());
    let c = one_plus(&x[0], &y[0]);
    if !c.is_positive() {
        return Err(Error::Precondition(format!("1 + x_1 y_1 = {c} is not positive")));
    }
    let dx = &x[1] - &x[0];
    let dy = &y[1] - &y[0];
    if dx.is_zero() {
        return Err(Error::Precondition("x_2 = x_1".into()));
    }
    if dy.is_zero() {
        return Err(Error::Precondition("y_2 = y_1".into()));
    }
    let rad_l = ratio(dy.clone(), &dx * &c)?;
    let rad_u = ratio(dx.clone(), &dy * &c)?;
    if rad_l.is_negative() {
        return Err(Error::Precondition(
            "(y_2 - y_1)/(x_2 - x_1) is negative; the second column is not real".into(),
        ));
    }
    let rad_1 = c.recip()?;
    let zero = RadicalScalar::from_rational(Rational::zero());
    let l = Matrix::try_from_fn(n, n, |i, j| match j {
        0 => RadicalScalar::new(one_plus(&y[0], &x[i]), rad_1.clone()),
        1 => RadicalScalar::new(&x[i] - &x[0], rad_l.clone()),
        _ => Ok(zero.clone()),
    })?;
    let u = Matrix::try_from_fn(n, n, |i, j| match i {
        0 => RadicalScalar::new(one_plus(&x[0], &y[j]), rad_1.clone()),
        1 => RadicalScalar::new(&y[j] - &y[0], rad_u.clone()),
        _ => Ok(zero.clone()),
    })?;
    Ok((l, u))
}

/// Exact `L·U` of [`lu_of_s`], computed through radical products.
pub fn lu_product(l: &RadicalMatrix, u: &RadicalMatrix) -> Result<ExactMatrix> {
    radical_mat_mul(l, u)
}

/// Display certificate for [`lu_of_s`]; its exact companion is `Y₁·D·Y₂ᵀ`.
pub fn lu_certificate(p: &GridParams) -> Result<FactorizationCertificate> {
    let (l, u) = lu_of_s(p)?;
    let nev = neville_intermediates_s(p)?;
    Ok(FactorizationCertificate {
        target: Target::s(p),
        n: p.n(),
        kind: crate::factor::CertificateKind::RadicalDisplay,
        factors: vec![
            Factor::Dense { matrix: AnyMatrix::Radical(l) },
            Factor::Dense { matrix: AnyMatrix::Radical(u) },
        ],
        squared_form: Some(vec![
            Factor::Dense { matrix: AnyMatrix::Exact(nev.y1) },
            Factor::Diagonal { d: nev.d },
            Factor::Dense { matrix: AnyMatrix::Exact(nev.y2.transpose()) },
        ]),
    })
}

/// Parameters of the elementary bidiagonal decomposition of `S`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SParameters {
    /// `alpha[i-2] = α_i`, `2 ≤ i ≤ n`
    pub alpha: Vec<Rational>,
    pub alpha_prime: Vec<Rational>,
    /// `beta[j-3] = β_j`, `3 ≤ j ≤ n`
    pub beta: Vec<Rational>,
    pub beta_prime: Vec<Rational>,
    pub d: Vec<Rational>,
}

fn alphas(x: &[Rational], y1: &Rational) -> Result<Vec<Rational>> {
    (1..x.len())
        .map(|i| ratio(one_plus(y1, &x[i]), one_plus(y1, &x[i - 1])))
        .collect()
}

fn betas(x: &[Rational], y1: &Rational) -> Result<Vec<Rational>> {
    (2..x.len())
        .map(|j| {
            ratio(
                (&x[j] - &x[j - 1]) * one_plus(y1, &x[j - 2]),
                (&x[j - 1] - &x[j - 2]) * one_plus(y1, &x[j - 1]),
            )
        })
        .collect()
}

fn s_diagonal(x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
    let c = one_plus(&x[0], &y[0]);
    let mut d = vec![Rational::zero(); x.len()];
    d[1] = ratio((&x[1] - &x[0]) * (&y[1] - &y[0]), c.clone())?;
    d[0] = c;
    Ok(d)
}

pub fn s_parameters(p: &GridParams) -> Result<SParameters> {
    need_two(p)?;
    check_nonvanishing(p)?;
    let (x, y) = (p.x().values(), p.y().values());
    Ok(SParameters {
        alpha: alphas(x, &y[0])?,
        alpha_prime: alphas(y, &x[0])?,
        beta: betas(x, &y[0])?,
        beta_prime: betas(y, &x[0])?,
        d: s_diagonal(x, y)?,
    })
}

/// `S` as `[L_n(α_n)…L_2(α_2)] [L_n(β_n)…L_3(β_3)] D [U_3(β′_3)…U_n(β′_n)] [U_2(α′_2)…U_n(α′_n)]`.
pub fn bidiagonal_decomposition_s(p: &GridParams) -> Result<FactorizationCertificate> {
    let n = p.n();
    let sp = s_parameters(p)?;
    let mut factors = Vec::with_capacity(4 * n);
    for i in (2..=n).rev() {
        factors.push(Factor::ElementaryLower { i, s: sp.alpha[i - 2].clone() });
    }
    for j in (3..=n).rev() {
        factors.push(Factor::ElementaryLower { i: j, s: sp.beta[j - 3].clone() });
    }
    factors.push(Factor::Diagonal { d: sp.d });
    for j in 3..=n {
        factors.push(Factor::ElementaryUpper { i: j, s: sp.beta_prime[j - 3].clone() });
    }
    for i in 2..=n {
        factors.push(Factor::ElementaryUpper { i, s: sp.alpha_prime[i - 2].clone() });
    }
    Ok(FactorizationCertificate::exact(Target::s(p), n, factors))
}

/// Matrices from the elimination argument behind the decomposition of `S`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NevilleIntermediates {
    pub m: ExactMatrix,
    pub m_prime: ExactMatrix,
    pub n: ExactMatrix,
    pub n_prime: ExactMatrix,
    pub y1: ExactMatrix,
    pub y2: ExactMatrix,
    pub d: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityChecks {
    pub m_n_equals_y1: bool,
    pub m_prime_n_prime_equals_y2: bool,
    pub y1_d_y2t_equals_s: bool,
}

impl IdentityChecks {
    pub fn all(&self) -> bool {
        self.m_n_equals_y1 && self.m_prime_n_prime_equals_y2 && self.y1_d_y2t_equals_s
    }
}

fn m_matrix(x: &[Rational], y1: &Rational) -> Result<ExactMatrix> {
    let n = x.len();
    Matrix::try_from_fn(n, n, |i, j| {
        if i >= j {
            ratio(one_plus(y1, &x[i]), one_plus(y1, &x[j]))
        } else {
            Ok(Rational::zero())
        }
    })
}

fn n_matrix(x: &[Rational], y1: &Rational) -> Result<ExactMatrix> {
    let n = x.len();
    Matrix::try_from_fn(n, n, |i, j| {
        if i == 0 && j == 0 {
            Ok(one())
        } else if j >= 1 && i >= j {
            ratio(
                (&x[i] - &x[i - 1]) * one_plus(y1, &x[j - 1]),
                (&x[j] - &x[j - 1]) * one_plus(y1, &x[i - 1]),
            )
        } else {
            Ok(Rational::zero())
        }
    })
}

fn y_matrix(x: &[Rational], y1: &Rational) -> Result<ExactMatrix> {
    let n = x.len();
    Matrix::try_from_fn(n, n, |i, j| {
        if j == 0 {
            ratio(one_plus(y1, &x[i]), one_plus(y1, &x[0]))
        } else if i >= j {
            ratio(&x[i] - &x[j - 1], &x[j] - &x[j - 1])
        } else {
            Ok(Rational::zero())
        }
    })
}

pub fn neville_intermediates_s(p: &GridParams) -> Result<NevilleIntermediates> {
    need_two(p)?;
    check_nonvanishing(p)?;
    let (x, y) = (p.x().values(), p.y().values());
    Ok(NevilleIntermediates {
        m: m_matrix(x, &y[0])?,
        m_prime: m_matrix(y, &x[0])?,
        n: n_matrix(x, &y[0])?,
        n_prime: n_matrix(y, &x[0])?,
        y1: y_matrix(x, &y[0])?,
        y2: y_matrix(y, &x[0])?,
        d: s_diagonal(x, y)?,
    })
}

impl NevilleIntermediates {
    pub fn identities(&self, s: &ExactMatrix) -> Result<IdentityChecks> {
        let y1dy2t = self
            .y1
            .mat_mul(&ExactMatrix::diagonal(&self.d))?
            .mat_mul(&self.y2.transpose())?;
        Ok(IdentityChecks {
            m_n_equals_y1: self.m.mat_mul(&self.n)? == self.y1,
            m_prime_n_prime_equals_y2: self.m_prime.mat_mul(&self.n_prime)? == self.y2,
            y1_d_y2t_equals_s: &y1dy2t == s,
        })
    }
}

/// Intermediates together with their identity checks against `S`.
pub fn neville_intermediates_checked(
    p: &GridParams,
) -> Result<(NevilleIntermediates, IdentityChecks)> {
    let nev = neville_intermediates_s(p)?;
    let checks = nev.identities(&gen_s(p))?;
    Ok((nev, checks))
}

/// `(x_i − x_{i−1−t}) / (x_{i−1} − x_{i−2−t})` over `t = 0..=hi`, 1-based
/// indices; empty when `hi < 0`.
fn lower_product(x: &[Rational], i: usize, hi: isize) -> Result<Rational> {
    let at = |k: usize| &x[k - 1];
    let mut acc = one();
    if hi < 0 {
        return Ok(acc);
    }
    for t in 0..=hi as usize {
        acc = acc * ratio(at(i) - at(i - 1 - t), at(i - 1) - at(i - 2 - t))?;
    }
    Ok(acc)
}

/// `(x_i − x_{i−t}) / (x_{i+1} − x_{i+1−t})` over `t = 1..=hi`.
fn upper_product(x: &[Rational], i: usize, hi: usize) -> Result<Rational> {
    let at = |k: usize| &x[k - 1];
    let mut acc = one();
    for t in 1..=hi {
        acc = acc * ratio(at(i) - at(i - t), at(i + 1) - at(i + 1 - t))?;
    }
    Ok(acc)
}

/// `L^{x(k)}` as a general lower bidiagonal factor.
pub fn vandermonde_lower(x: &[Rational], k: usize) -> Result<Factor> {
    let n = x.len();
    let mut sub = Vec::with_capacity(n - 1);
    for i in 2..=n {
        let threshold = n - k + 1;
        sub.push(if i == threshold {
            one()
        } else if i > threshold {
            lower_product(x, i, k as isize - n as isize + i as isize - 2)?
        } else {
            Rational::zero()
        });
    }
    Ok(Factor::GeneralLower { diag: vec![one(); n], sub })
}

/// `U^{x(k)}` as a general upper bidiagonal factor.
pub fn vandermonde_upper(x: &[Rational], k: usize) -> Result<Factor> {
    let n = x.len();
    let at = |i: usize| &x[i - 1];
    let edge = n - k;
    let diag = (1..=n)
        .map(|i| if i <= edge { one() } else { at(i) - at(edge) })
        .collect();
    let mut sup = Vec::with_capacity(n - 1);
    for i in 1..n {
        sup.push(if i == edge {
            at(1).clone()
        } else if i > edge {
            let hi = k + i - n;
            at(hi + 1) * upper_product(x, i, hi)?
        } else {
            Rational::zero()
        });
    }
    Ok(Factor::GeneralUpper { diag, sup })
}

/// `[L^{x(1)}…L^{x(n−1)}]` and `[U^{x(n−1)}…U^{x(1)}]`, in product order.
fn vandermonde_factors(x: &Grid) -> Result<(Vec<Factor>, Vec<Factor>)> {
    x.require(GridOrdering::DistinctOnly)?;
    let v = x.values();
    let n = v.len();
    let lower = (1..n).map(|k| vandermonde_lower(v, k)).collect::<Result<_>>()?;
    let upper = (1..n).rev().map(|k| vandermonde_upper(v, k)).collect::<Result<_>>()?;
    Ok((lower, upper))
}

/// `V_x = L^{x(1)}…L^{x(n−1)} U^{x(n−1)}…U^{x(1)}`.
pub fn vandermonde_bidiagonal(x: &Grid) -> Result<FactorizationCertificate> {
    let (mut factors, upper) = vandermonde_factors(x)?;
    factors.extend(upper);
    Ok(FactorizationCertificate::exact(
        Target::Vandermonde { x: x.clone() },
        x.len(),
        factors,
    ))
}

/// `diag(C(m,0), …, C(m,m), 0, …, 0)` of size `n`.
pub fn binomial_diagonal(n: usize, m: usize) -> Vec<Rational> {
    (0..n)
        .map(|k| if k <= m { Rational::binomial(m, k) } else { Rational::zero() })
        .collect()
}

/// `S^{∘m} = V_x D_m V_yᵀ` with both Vandermonde matrices in bidiagonal form.
pub fn hadamard_power_decomposition(p: &GridParams, m: u32) -> Result<FactorizationCertificate> {
    let n = need_two(p)?;
    let mu = m as usize;
    if mu < 1 || mu > n - 1 {
        return Err(Error::Domain(format!("m = {m} is outside 1..={}", n - 1)));
    }
    let (x_lower, x_upper) = vandermonde_factors(p.x())?;
    let (y_lower, y_upper) = vandermonde_factors(p.y())?;
    let mut factors = x_lower;
    factors.extend(x_upper);
    factors.push(Factor::Diagonal { d: binomial_diagonal(n, mu) });
    // (L1…L_{n−1} U_{n−1}…U1)ᵀ = U1ᵀ…U_{n−1}ᵀ L_{n−1}ᵀ…L1ᵀ
    factors.extend(y_upper.iter().rev().map(Factor::transpose));
    factors.extend(y_lower.iter().rev().map(Factor::transpose));
    Ok(FactorizationCertificate::exact(Target::s_pow(p, m), n, factors))
}

/// `[min(μ_i, μ_j)] = L′U′`.
pub fn min_matrix_lu(mu: &Grid) -> Result<FactorizationCertificate> {
    mu.require(GridOrdering::StrictlyIncreasingPositive)?;
    let v = mu.values();
    let n = v.len();
    let l = ExactMatrix::from_fn(n, n, |i, j| {
        if i < j {
            Rational::zero()
        } else if j == 0 {
            v[0].clone()
        } else {
            &v[j] - &v[j - 1]
        }
    });
    let u = ExactMatrix::from_fn(n, n, |i, j| if i <= j { one() } else { Rational::zero() });
    Ok(FactorizationCertificate::exact(
        Target::Min { mu: mu.clone() },
        n,
        vec![
            Factor::Dense { matrix: l.into() },
            Factor::Dense { matrix: u.into() },
        ],
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EliminationStage {
    /// Eliminating below the diagonal of `A`.
    Lower,
    /// Eliminating below the diagonal of `Uᵀ`.
    Upper,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum NevilleOutcome {
    Factored { certificate: FactorizationCertificate },
    /// Entry `(row, col)` (1-based) could not be eliminated because the entry
    /// directly above it is zero.
    Breakdown {
        stage: EliminationStage,
        row: usize,
        col: usize,
    },
}

/// Eliminates below the diagonal with adjacent-row operations, bottom-up in
/// each column. Returns the multipliers `(i, m)` (1-based row `i`, operation
/// `row_i -= m·row_{i−1}`) and the reduced matrix, or the failing entry.
fn neville_pass(a: &ExactMatrix) -> std::result::Result<(Vec<(usize, Rational)>, Vec<Vec<Rational>>), (usize, usize)> {
    let n = a.rows();
    let mut rows = a.to_rows();
    let mut ops = Vec::new();
    for j in 0..n.saturating_sub(1) {
        for i in (j + 1..n).rev() {
            if rows[i][j].is_zero() {
                continue;
            }
            if rows[i - 1][j].is_zero() {
                return Err((i + 1, j + 1));
            }
            let m = rows[i][j].checked_div(&rows[i - 1][j]).expect("pivot checked nonzero");
            let (above, below) = rows.split_at_mut(i);
            for (dst, src) in below[0][j..].iter_mut().zip(&above[i - 1][j..]) {
                *dst -= &m * src;
            }
            ops.push((i + 1, m));
        }
    }
    Ok((ops, rows))
}

/// Neville elimination without row exchanges:
/// `A = [L_i(m) in elimination order] · D · [U_i(m) in reverse elimination order]`.
pub fn neville_elimination_generic(a: &ExactMatrix) -> Result<NevilleOutcome> {
    let n = a.require_square()?;
    let (lower_ops, reduced) = match neville_pass(a) {
        Ok(v) => v,
        Err((row, col)) => {
            return Ok(NevilleOutcome::Breakdown { stage: EliminationStage::Lower, row, col })
        }
    };
    let u = Matrix::from_rows(reduced)?;
    let (upper_ops, diag_rows) = match neville_pass(&u.transpose()) {
        Ok(v) => v,
        Err((row, col)) => {
            return Ok(NevilleOutcome::Breakdown { stage: EliminationStage::Upper, row: col, col: row })
        }
    };
    let mut factors: Vec<Factor> = lower_ops
        .into_iter()
        .map(|(i, s)| Factor::ElementaryLower { i, s })
        .collect();
    factors.push(Factor::Diagonal {
        d: (0..n).map(|k| diag_rows[k][k].clone()).collect(),
    });
    factors.extend(upper_ops.into_iter().rev().map(|(i, s)| Factor::ElementaryUpper { i, s }));
    let certificate = FactorizationCertificate::exact(
        Target::Matrix { matrix: a.clone().into() },
        n,
        factors,
    );
    Ok(NevilleOutcome::Factored { certificate })
}

/// Exact product of a certificate's factors; convenience for callers that
/// only need the reconstructed matrix.
pub fn reconstruct(cert: &FactorizationCertificate) -> Result<ExactMatrix> {
    match cert.kind {
        crate::factor::CertificateKind::Exact => exact_product(&cert.factors, cert.n),
        crate::factor::CertificateKind::RadicalDisplay => cert.product(),
    }
}
