use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactMatrix, FloatMatrix};
use crate::error::Result;
use crate::scalar::Rational;

/// Clears denominators row by row. Returns the integer rows together with the
/// product of the row multipliers.
fn integer_rows(a: &ExactMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..a.rows())
        .map(|i| {
            let row = a.row(i);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let ints = row
                .iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect();
            scale *= &lcm;
            ints
        })
        .collect();
    (rows, scale)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // exact by Sylvester's identity
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant. Rows are scaled to integers and reduced with Bareiss
/// elimination, so no intermediate fractions are formed.
pub fn det_exact(a: &ExactMatrix) -> Result<Rational> {
    a.require_square()?;
    let (rows, scale) = integer_rows(a);
    Rational::from_bigints(bareiss(rows), scale)
}

/// Rank over the rationals.
pub fn rank_exact(a: &ExactMatrix) -> usize {
    let (mut m, _) = integer_rows(a);
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            let (pivot, factor) = (m[rank][col].clone(), m[i][col].clone());
            for j in col..cols {
                m[i][j] = &m[i][j] * &pivot - &m[rank][j] * &factor;
            }
            let g = m[i].iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !g.is_zero() && !g.abs().is_one() {
                for v in m[i].iter_mut() {
                    *v /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant in binary64 via LU with partial pivoting.
pub fn det_float(a: &FloatMatrix) -> Result<f64> {
    let n = a.require_square()?;
    let mut m = a.to_rows();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap_or(k);
        if m[p][k] == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k];
        det *= pivot;
        for i in k + 1..n {
            let f = m[i][k] / pivot;
            if f != 0.0 {
                for j in k + 1..n {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::matrix::{exact_from_ints, exact_from_strs, Matrix};

    #[test]
    fn small_determinants() {
        assert_eq!(det_exact(&exact_from_ints(&[[2, 3], [3, 5]])).unwrap(), Rational::one());
        let cauchy = exact_from_strs(&[&["1/2", "1/3"], &["1/3", "1/4"]]).unwrap();
        assert_eq!(det_exact(&cauchy).unwrap(), "1/72".parse().unwrap());
        let d = exact_from_strs(&[&["2", "0"], &["0", "1/2"]]).unwrap();
        assert_eq!(det_exact(&d).unwrap(), Rational::one());
    }

    #[test]
    fn pivoting_and_singular_cases() {
        assert_eq!(
            det_exact(&exact_from_ints(&[[0, 1], [1, 0]])).unwrap(),
            Rational::from_integer(-1)
        );
        assert!(det_exact(&exact_from_ints(&[[2, 3, 4], [3, 5, 7], [4, 7, 10]]))
            .unwrap()
            .is_zero());
        assert_eq!(det_exact(&ExactMatrix::identity(0)).unwrap(), Rational::one());
        assert!(matches!(
            det_exact(&exact_from_ints(&[[1, 2, 3]])),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn ranks() {
        let s4 = Matrix::from_fn(4, 4, |i, j| Rational::from_integer(1 + (i as i64 + 1) * (j as i64 + 1)));
        assert_eq!(rank_exact(&s4), 2);
        assert_eq!(rank_exact(&ExactMatrix::zeros(3, 4)), 0);
        let s4sq = s4.hadamard(&s4).unwrap();
        assert_eq!(rank_exact(&s4sq), 3);
        assert_eq!(rank_exact(&exact_from_ints(&[[0, 0, 1], [0, 0, 2]])), 1);
    }

    #[test]
    fn float_determinant() {
        let a = Matrix::from_rows(vec![vec![0.0, 2.0], vec![3.0, 1.0]]).unwrap();
        assert!((det_float(&a).unwrap() + 6.0).abs() < 1e-15);
        let s = Matrix::from_rows(vec![vec![2.0, 3.0], vec![3.0, 5.0]]).unwrap();
        assert!((det_float(&s).unwrap() - 1.0).abs() < 1e-14);
    }
}
