//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p tnfactor-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tnfactor_core::factor::{verify_certificate, Factor, VerificationReport};
use tnfactor_core::factorizations::{
    bidiagonal_decomposition_s, hadamard_power_decomposition, lu_certificate, lu_of_s,
    min_matrix_lu, neville_intermediates_s,
};
use tnfactor_core::generators::{
    gen_mean, gen_s, gen_s_hadamard_int, gen_s_hadamard_real, Exponent, ExtendedReal, MeanKind,
};
use tnfactor_core::grid::{random_increasing_grid, random_spread_grid};
use tnfactor_core::matrix::{is_psd_float, rank_exact, FloatMatrix, MinorValue, PsdVerdict};
use tnfactor_core::positivity::{check_tn, check_tp, Mode};
use tnfactor_core::{AnyMatrix, ExactMatrix, FloatScalar, Grid, GridOrdering, GridParams, Rational};

type Outcome = Result<String, String>;

const TOL: f64 = 1e-10;

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(p: &GridParams) -> String {
    let list = |g: &Grid| g.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    format!("x=({}) y=({})", list(p.x()), list(p.y()))
}

/// 200 grid pairs with `n` cycling through 2..=7.
fn criterion_one_grids() -> Vec<GridParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    (0..200)
        .map(|i| {
            let n = 2 + i % 6;
            let x = random_increasing_grid(&mut rng, n);
            let y = random_increasing_grid(&mut rng, n);
            GridParams::new(x, y).unwrap()
        })
        .collect()
}

fn exact_equal(report: VerificationReport, what: impl FnOnce() -> String) -> Result<(), String> {
    ensure(report == VerificationReport::ExactEqual, || format!("{}: {report:?}", what()))
}

fn c1(grids: &[GridParams]) -> Outcome {
    for p in grids {
        let cert = bidiagonal_decomposition_s(p).map_err(|e| e.to_string())?;
        let report = verify_certificate(&cert, &gen_s(p).into()).map_err(|e| e.to_string())?;
        exact_equal(report, || show(p))?;
    }
    Ok(format!("{} certificates reconstruct S exactly", grids.len()))
}

/// `C(m, i)` by the multiplicative formula.
fn choose(m: usize, i: usize) -> Rational {
    (0..i).fold(Rational::one(), |acc, t| {
        acc * q((m - t) as i64, 1) * q(1, (t + 1) as i64)
    })
}

fn c2(grids: &[GridParams]) -> Outcome {
    let mut count = 0;
    for p in grids {
        let n = p.n();
        for m in 1..n {
            let cert = hadamard_power_decomposition(p, m as u32).map_err(|e| e.to_string())?;
            let target = gen_s_hadamard_int(p, m as u32);
            let report = verify_certificate(&cert, &target.into()).map_err(|e| e.to_string())?;
            exact_equal(report, || format!("m={m} {}", show(p)))?;
            let expected: Vec<Rational> =
                (0..n).map(|i| if i <= m { choose(m, i) } else { Rational::zero() }).collect();
            let diagonals: Vec<&Vec<Rational>> = cert
                .factors
                .iter()
                .filter_map(|f| match f {
                    Factor::Diagonal { d } => Some(d),
                    _ => None,
                })
                .collect();
            ensure(diagonals == [&expected], || format!("m={m}: D_m = {diagonals:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (grid, m) pairs reconstruct S^(m) exactly with binomial D_m"))
}

fn c3(grids: &[GridParams]) -> Outcome {
    let mut worst = 0.0f64;
    for p in grids {
        let s = gen_s(p);
        let nev = neville_intermediates_s(p).map_err(|e| e.to_string())?;
        let squared = nev
            .y1
            .mat_mul(&ExactMatrix::diagonal(&nev.d))
            .and_then(|m| m.mat_mul(&nev.y2.transpose()))
            .map_err(|e| e.to_string())?;
        ensure(squared == s, || format!("Y1 D Y2^T differs from S for {}", show(p)))?;

        let (l, u) = lu_of_s(p).map_err(|e| e.to_string())?;
        let lf = l.to_float().map_err(|e| e.to_string())?;
        let uf = u.to_float().map_err(|e| e.to_string())?;
        let lu = lf.mat_mul(&uf).map_err(|e| e.to_string())?;
        let sf = s.to_float().map_err(|e| e.to_string())?;
        for i in 0..p.n() {
            for j in 0..p.n() {
                let (a, b) = (*lu.get(i, j), *sf.get(i, j));
                let rel = (a - b).abs() / b.abs();
                worst = worst.max(rel);
                ensure(rel <= 1e-12, || {
                    format!("float L*U entry ({},{}) off by {rel:e} for {}", i + 1, j + 1, show(p))
                })?;
            }
        }
        let report = verify_certificate(&lu_certificate(p).map_err(|e| e.to_string())?, &s.into())
            .map_err(|e| e.to_string())?;
        ensure(matches!(report, VerificationReport::FloatEqual { .. }), || format!("{report:?}"))?;
    }
    Ok(format!("squared form exact; max relative deviation of float L*U {worst:.2e}"))
}

fn c4() -> Outcome {
    let n = 5;
    let x = Grid::from_ints(&[1, 2, 3, 4, 5], GridOrdering::StrictlyIncreasingPositive).unwrap();
    let p = GridParams::symmetric(x);
    let cert = bidiagonal_decomposition_s(&p).map_err(|e| e.to_string())?;
    let nn = n as i64;
    let mut expected = Vec::new();
    for i in (2..=nn).rev() {
        expected.push(Factor::ElementaryLower { i: i as usize, s: q(i + 1, i) });
    }
    for j in (3..=nn).rev() {
        expected.push(Factor::ElementaryLower { i: j as usize, s: q(j - 1, j) });
    }
    expected.push(Factor::Diagonal { d: vec![q(2, 1), q(1, 2), q(0, 1), q(0, 1), q(0, 1)] });
    for j in 3..=nn {
        expected.push(Factor::ElementaryUpper { i: j as usize, s: q(j - 1, j) });
    }
    for i in 2..=nn {
        expected.push(Factor::ElementaryUpper { i: i as usize, s: q(i + 1, i) });
    }
    ensure(cert.factors == expected, || format!("factors {:?}", cert.factors))?;
    let target = ExactMatrix::from_fn(n, n, |i, j| q(1 + ((i + 1) * (j + 1)) as i64, 1));
    exact_equal(verify_certificate(&cert, &target.into()).map_err(|e| e.to_string())?, || {
        "product vs [1+ij]".into()
    })?;
    Ok("parameters 6/5..3/2, 4/5..2/3 and D = diag(2,1/2,0,0,0); product = [1+ij]".into())
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut pairs = 0;
    for i in 0..50 {
        let n = 3 + i % 5;
        let p = GridParams::new(random_increasing_grid(&mut rng, n), random_increasing_grid(&mut rng, n))
            .unwrap();
        for m in 0..=(n - 2) as u32 {
            let rank = rank_exact(&gen_s_hadamard_int(&p, m));
            ensure(rank == m as usize + 1, || format!("m={m}: rank {rank} for {}", show(&p)))?;
            pairs += 1;
        }
    }
    Ok(format!("rank = m+1 for {pairs} (grid, m) pairs"))
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mode = Mode::Float { tol: TOL };
    let mut samples = 0;
    for n in [3usize, 4] {
        for _ in 0..20 {
            let p = GridParams::new(random_spread_grid(&mut rng, n), random_spread_grid(&mut rng, n))
                .unwrap();
            let b = n as f64 - 2.0;
            let power = |r: f64| -> Result<AnyMatrix, String> {
                Ok(gen_s_hadamard_real(&p, FloatScalar::new(r).unwrap()).map_err(|e| e.to_string())?.into())
            };
            for r in [b + 0.25, b + 1.0] {
                let v = check_tp(&power(r)?, n, mode).map_err(|e| e.to_string())?;
                ensure(v.holds() && v.indeterminate_count == 0, || {
                    format!("r={r}: TP verdict {v:?} for {}", show(&p))
                })?;
                samples += 1;
            }
            let mut low = vec![0.5, b - 0.5];
            low.dedup();
            for r in low {
                let v = check_tn(&power(r)?, n, mode).map_err(|e| e.to_string())?;
                let negative = v.witness().is_some_and(|w| {
                    !w.near_zero && matches!(w.value, MinorValue::Float(x) if x < 0.0)
                });
                ensure(v.fails() && negative && v.indeterminate_count == 0, || {
                    format!("r={r}: TN verdict {v:?} for {}", show(&p))
                })?;
                samples += 1;
            }
        }
    }
    Ok(format!("{samples} samples on 40 grids match the threshold, no indeterminate minors"))
}

fn c7() -> Outcome {
    let x = [1.0f64, 2.0, 3.0];
    let gram = |r: f64| FloatMatrix::from_fn(3, 3, |i, j| (1.0 + x[i] * x[j]).powf(r));
    for (r, want) in [(1.0, PsdVerdict::Psd), (2.0, PsdVerdict::Psd), (0.5, PsdVerdict::NotPsd)] {
        let got = is_psd_float(&gram(r), TOL).map_err(|e| e.to_string())?;
        ensure(got.verdict == want, || format!("r={r}: {:?} eigenvalues {:?}", got.verdict, got.eigenvalues))?;
    }
    Ok("PSD at r = 1, 2; not PSD at r = 0.5".into())
}

fn c8() -> Outcome {
    let lambda = Grid::from_ints(&[1, 2, 3, 4], GridOrdering::StrictlyIncreasingPositive).unwrap();
    let mode = Mode::Float { tol: TOL };
    let fin = |p, d| ExtendedReal::Finite(q(p, d));
    let mut tp_kinds = vec![MeanKind::ArithmeticReciprocal, MeanKind::Harmonic];
    for nu in [q(0, 1), q(3, 10), q(1, 1)] {
        tp_kinds.push(MeanKind::HeinzReciprocal { nu });
    }
    for (p, d) in [(1, 2), (1, 1), (3, 1)] {
        tp_kinds.push(MeanKind::BinomialReciprocal { alpha: fin(p, d) });
        tp_kinds.push(MeanKind::Binomial { alpha: fin(-p, d) });
    }
    let tn_kinds = [
        MeanKind::HeinzReciprocal { nu: q(1, 2) },
        MeanKind::BinomialReciprocal { alpha: fin(0, 1) },
        MeanKind::BinomialReciprocal { alpha: ExtendedReal::Infinity },
        MeanKind::Binomial { alpha: ExtendedReal::NegInfinity },
    ];
    let exponents = [
        Exponent::Float(FloatScalar::new(0.5).unwrap()),
        Exponent::Integer(1),
        Exponent::Integer(2),
        Exponent::Float(FloatScalar::new(3.7).unwrap()),
    ];
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in exponents {
        for kind in &tp_kinds {
            let a = gen_mean(kind, &lambda, r).map_err(|e| e.to_string())?;
            let v = check_tp(&a, 4, mode).map_err(|e| e.to_string())?;
            checked += 1;
            if !v.holds() {
                let w = v.witness().unwrap();
                let rel = match (&w.value, w.scale) {
                    (MinorValue::Float(x), Some(s)) => x / s,
                    _ => f64::NAN,
                };
                failures.push(format!(
                    "{kind} r={r}: TP4 fails at {} (minor/scale = {rel:.2e})",
                    w.minor
                ));
            }
        }
        for kind in &tn_kinds {
            let a = gen_mean(kind, &lambda, r).map_err(|e| e.to_string())?;
            let tn = check_tn(&a, 4, mode).map_err(|e| e.to_string())?;
            let tp = check_tp(&a, 4, mode).map_err(|e| e.to_string())?;
            checked += 1;
            if !(tn.holds() && tp.fails()) {
                failures.push(format!("{kind} r={r}: TN holds {} / TP fails {}", tn.holds(), tp.fails()));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} (family, r) verdicts as predicted"))
    } else {
        Err(format!("{} of {checked} verdicts off: {}", failures.len(), failures.join("; ")))
    }
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut grids = vec![Grid::from_ints(&[1, 2, 3], GridOrdering::StrictlyIncreasingPositive).unwrap()];
    for i in 0..20 {
        grids.push(random_increasing_grid(&mut rng, 3 + i % 5));
    }
    for mu in &grids {
        let cert = min_matrix_lu(mu).map_err(|e| e.to_string())?;
        let v = mu.values();
        let target = ExactMatrix::from_fn(v.len(), v.len(), |i, j| {
            if v[i] <= v[j] { v[i].clone() } else { v[j].clone() }
        });
        let report = verify_certificate(&cert, &target.clone().into()).map_err(|e| e.to_string())?;
        exact_equal(report, || format!("min matrix of {v:?}"))?;
        let tn = check_tn(&target.into(), 3, Mode::Exact).map_err(|e| e.to_string())?;
        ensure(tn.holds(), || format!("TN3 verdict {tn:?}"))?;
    }
    Ok(format!("{} min matrices reconstruct exactly and are TN3", grids.len()))
}

/// Cofactor expansion along the first row.
fn naive_det(a: &[Vec<Rational>]) -> Rational {
    if a.is_empty() {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for c in 0..a.len() {
        let sub: Vec<Vec<Rational>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &a[0][c] * &naive_det(&sub);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Index sets of size `k` from `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in subsets(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                let mut s = vec![first];
                s.extend(rest);
                out.push(s);
            }
        }
    }
    out
}

/// First violating minor (1-based sets) or `None`.
fn naive_first_violation(a: &[Vec<Rational>], strict: bool) -> Option<(Vec<usize>, Vec<usize>, Rational)> {
    let n = a.len();
    for k in 1..=n {
        for r in subsets(n, k) {
            for c in subsets(n, k) {
                let sub: Vec<Vec<Rational>> =
                    r.iter().map(|&i| c.iter().map(|&j| a[i][j].clone()).collect()).collect();
                let d = naive_det(&sub);
                let bad = if strict { !d.is_positive() } else { d.is_negative() };
                if bad {
                    let one_based = |s: &Vec<usize>| s.iter().map(|v| v + 1).collect();
                    return Some((one_based(&r), one_based(&c), d));
                }
            }
        }
    }
    None
}

/// Random products of nonnegative bidiagonal matrices (TN by construction)
/// interleaved with unconstrained integer matrices.
fn random_matrix(rng: &mut ChaCha8Rng, idx: usize) -> Vec<Vec<Rational>> {
    let n = 1 + idx % 5;
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| q(i64::from(i == j), 1)).collect())
        .collect();
    if idx % 2 == 0 {
        for _ in 0..2 * n {
            let i = rng.random_range(0..n);
            let s = q(rng.random_range(0..=4), rng.random_range(1..=3));
            if i == 0 {
                let d = q(rng.random_range(1..=3), 1);
                a[0].iter_mut().for_each(|v| *v = &*v * &d);
            } else if rng.random_bool(0.5) {
                let above = a[i - 1].clone();
                a[i].iter_mut().zip(&above).for_each(|(v, w)| *v += &s * w);
            } else {
                for row in a.iter_mut() {
                    let left = row[i - 1].clone();
                    row[i] += &s * &left;
                }
            }
        }
        a
    } else {
        (0..n).map(|_| (0..n).map(|_| q(rng.random_range(-2..=9), 1)).collect()).collect()
    }
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let (mut tn_holds, mut tp_holds) = (0, 0);
    for idx in 0..100 {
        let rows = random_matrix(&mut rng, idx);
        let n = rows.len();
        let a: AnyMatrix = ExactMatrix::from_rows(rows.clone()).unwrap().into();
        for strict in [true, false] {
            let v = if strict { check_tp(&a, n, Mode::Exact) } else { check_tn(&a, n, Mode::Exact) }
                .map_err(|e| e.to_string())?;
            let naive = naive_first_violation(&rows, strict);
            let agree = match (&naive, v.witness()) {
                (None, None) => v.holds(),
                (Some((r, c, d)), Some(w)) => {
                    let json = serde_json::to_value(&w.minor).unwrap();
                    v.fails()
                        && json["rows"] == serde_json::json!(r)
                        && json["cols"] == serde_json::json!(c)
                        && w.value == MinorValue::Exact(d.clone())
                }
                _ => false,
            };
            ensure(agree, || format!("matrix {idx} ({}): {v:?} vs naive {naive:?}", if strict { "TP" } else { "TN" }))?;
            if v.holds() {
                if strict { tp_holds += 1 } else { tn_holds += 1 }
            }
        }
    }
    Ok(format!("100 matrices agree ({tp_holds} TP, {tn_holds} TN)"))
}

fn c11(grids: &[GridParams]) -> Outcome {
    let mut params = 0;
    for p in grids {
        let mut certs = vec![bidiagonal_decomposition_s(p).map_err(|e| e.to_string())?];
        for m in 1..p.n() as u32 {
            certs.push(hadamard_power_decomposition(p, m).map_err(|e| e.to_string())?);
        }
        for cert in &certs {
            for value in cert.parameters() {
                ensure(!value.is_negative(), || format!("negative parameter {value} for {}", show(p)))?;
                params += 1;
            }
        }
    }
    Ok(format!("{params} parameters, all nonnegative"))
}

fn main() -> ExitCode {
    let grids = criterion_one_grids();
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "decomposition of S reconstructs exactly", Box::new(|| c1(&grids))),
        (2, "integer Hadamard powers reconstruct exactly", Box::new(|| c2(&grids))),
        (3, "LU display form and squared form", Box::new(|| c3(&grids))),
        (4, "golden vector for [1+ij]", Box::new(c4)),
        (5, "rank law", Box::new(c5)),
        (6, "exponent threshold", Box::new(c6)),
        (7, "PSD boundary", Box::new(c7)),
        (8, "mean matrices", Box::new(c8)),
        (9, "min-matrix certificate", Box::new(c9)),
        (10, "oracle agreement", Box::new(c10)),
        (11, "factor nonnegativity", Box::new(|| c11(&grids))),
    ];
    let mut failed = 0;
    for (id, name, run) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run()))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
