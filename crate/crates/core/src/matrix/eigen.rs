//! Symmetric eigenvalues: Householder reduction to tridiagonal form followed
//! by implicit QL iteration with Wilkinson-style shifts.

use serde::Serialize;

use super::FloatMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Reduces the symmetric matrix `a` (lower triangle is used) to tridiagonal
/// form. Returns the diagonal and the subdiagonal; `off[0]` is unused.
fn tridiagonalize(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a[i][..=l].iter().map(|v| v.abs()).sum();
            if scale == 0.0 {
                off[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                off[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in j + 1..=l {
                        g += a[k][j] * a[i][k];
                    }
                    off[j] = g / h;
                    f += off[j] * a[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = off[j] - hh * f;
                    off[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * off[k] + g * a[i][k];
                    }
                }
            }
        } else {
            off[i] = a[i][l];
        }
        diag[i] = h;
    }
    for i in 0..n {
        diag[i] = a[i][i];
    }
    (diag, off)
}

/// Implicit QL on a symmetric tridiagonal matrix. `off[i]` holds the
/// (i, i-1) entry on input. Returns `None` when an eigenvalue fails to
/// converge within the sweep budget.
fn tridiagonal_ql(mut d: Vec<f64>, mut e: Vec<f64>) -> Option<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Some(d);
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some(d)
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(a: &FloatMatrix) -> Result<Vec<f64>> {
    a.require_square()?;
    let (d, e) = tridiagonalize(a.to_rows());
    let mut eig = tridiagonal_ql(d, e)
        .ok_or_else(|| Error::Domain("symmetric eigenvalue iteration did not converge".into()))?;
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PsdVerdict {
    Psd,
    NotPsd,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsdReport {
    pub verdict: PsdVerdict,
    /// Ascending; empty when the iteration did not converge.
    pub eigenvalues: Vec<f64>,
    pub scale: f64,
}

/// Positive semidefiniteness test with a relative tolerance: the matrix is
/// PSD when every eigenvalue is at least `-tol·max|eigenvalue|`.
pub fn is_psd_float(a: &FloatMatrix, tol: f64) -> Result<PsdReport> {
    let n = a.require_square()?;
    let magnitude = a.entries().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        for j in 0..i {
            if (a.get(i, j) - a.get(j, i)).abs() > tol * magnitude {
                return Err(Error::Asymmetric { row: i, col: j });
            }
        }
    }
    let sym = FloatMatrix::from_fn(n, n, |i, j| 0.5 * (a.get(i, j) + a.get(j, i)));
    let (d, e) = tridiagonalize(sym.to_rows());
    let Some(mut eig) = tridiagonal_ql(d, e) else {
        return Ok(PsdReport {
            verdict: PsdVerdict::Indeterminate,
            eigenvalues: Vec::new(),
            scale: f64::NAN,
        });
    };
    eig.sort_by(f64::total_cmp);
    let scale = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = eig.first().copied().unwrap_or(0.0);
    let verdict = if min < -tol * scale {
        PsdVerdict::NotPsd
    } else {
        PsdVerdict::Psd
    };
    Ok(PsdReport {
        verdict,
        eigenvalues: eig,
        scale,
    })
}
