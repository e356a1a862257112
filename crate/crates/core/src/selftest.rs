//! Seeded invariant suite over built-in and random grids.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{verify_certificate, VerificationReport};
use crate::factorizations::{
    bidiagonal_decomposition_s, hadamard_power_decomposition, lu_certificate, min_matrix_lu,
    neville_elimination_generic, neville_intermediates_checked, vandermonde_bidiagonal,
    NevilleOutcome,
};
use crate::generators::{gen_s, gen_s_hadamard_int, gen_vandermonde};
use crate::grid::{
    random_distinct_grid, random_increasing_grid, random_spread_grid, Grid, GridOrdering,
    GridParams,
};
use crate::matrix::AnyMatrix;
use crate::positivity::{check_tn, rank_of_hadamard_power, scan_hadamard_threshold, Mode, DEFAULT_TOL};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn run_check(
    name: &'static str,
    cases: usize,
    mut case: impl FnMut(usize) -> Result<()>,
) -> CheckResult {
    for i in 0..cases {
        if let Err(e) = case(i) {
            let failure = Some(format!("case {i}: {e}"));
            return CheckResult { name, cases, passed: false, failure };
        }
    }
    CheckResult { name, cases, passed: true, failure: None }
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

fn exact_equal(report: &VerificationReport) -> Result<()> {
    expect(*report == VerificationReport::ExactEqual, || format!("{report:?}"))
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grids: Vec<GridParams> = (0..24)
        .map(|i| {
            let n = 2 + i % 6;
            GridParams::new(random_increasing_grid(&mut rng, n), random_increasing_grid(&mut rng, n))
                .expect("equal lengths")
        })
        .collect();
    let distinct: Vec<Grid> = (0..12).map(|i| random_distinct_grid(&mut rng, 1 + i % 6)).collect();
    let spread: Vec<GridParams> = (0..4)
        .map(|i| {
            let n = 3 + i % 2;
            GridParams::new(random_spread_grid(&mut rng, n), random_spread_grid(&mut rng, n))
                .expect("equal lengths")
        })
        .collect();
    let builtin = GridParams::symmetric(
        Grid::from_ints(&[1, 2, 3, 4, 5], GridOrdering::StrictlyIncreasingPositive)
            .expect("increasing positive"),
    );

    let mut checks = Vec::new();
    checks.push(run_check("bidiagonal-decomposition-reconstructs", grids.len() + 1, |i| {
        let p = grids.get(i).unwrap_or(&builtin);
        let cert = bidiagonal_decomposition_s(p)?;
        exact_equal(&verify_certificate(&cert, &gen_s(p).into())?)
    }));
    checks.push(run_check("factor-parameters-nonnegative", grids.len(), |i| {
        let cert = bidiagonal_decomposition_s(&grids[i])?;
        expect(cert.parameters().iter().all(|q| !q.is_negative()), || "negative parameter".into())
    }));
    checks.push(run_check("hadamard-power-reconstructs", grids.len(), |i| {
        let p = &grids[i];
        for m in 1..p.n() as u32 {
            let cert = hadamard_power_decomposition(p, m)?;
            exact_equal(&verify_certificate(&cert, &gen_s_hadamard_int(p, m).into())?)?;
        }
        Ok(())
    }));
    checks.push(run_check("vandermonde-reconstructs", distinct.len(), |i| {
        let cert = vandermonde_bidiagonal(&distinct[i])?;
        exact_equal(&verify_certificate(&cert, &gen_vandermonde(&distinct[i]).into())?)
    }));
    checks.push(run_check("intermediate-identities", grids.len(), |i| {
        let (_, ids) = neville_intermediates_checked(&grids[i])?;
        expect(ids.all(), || format!("{ids:?}"))
    }));
    checks.push(run_check("lu-display-verifies", grids.len(), |i| {
        let p = &grids[i];
        let report = verify_certificate(&lu_certificate(p)?, &gen_s(p).into())?;
        expect(matches!(report, VerificationReport::FloatEqual { .. }), || format!("{report:?}"))
    }));
    checks.push(run_check("rank-law", grids.len(), |i| {
        let p = &grids[i];
        for m in 0..p.n().saturating_sub(1) as u32 {
            let rank = rank_of_hadamard_power(p, m)?;
            expect(rank == m as usize + 1, || format!("m = {m}: rank {rank}"))?;
        }
        Ok(())
    }));
    checks.push(run_check("min-matrix-tn", grids.len(), |i| {
        let mu = grids[i].x();
        let cert = min_matrix_lu(mu)?;
        let product: AnyMatrix = cert.product()?.into();
        exact_equal(&verify_certificate(&cert, &cert.target.materialize()?)?)?;
        let v = check_tn(&product, mu.len(), Mode::Exact)?;
        expect(v.holds(), || format!("{v:?}"))
    }));
    checks.push(run_check("generic-neville-product", grids.len(), |i| {
        let s = gen_s(&grids[i]);
        match neville_elimination_generic(&s)? {
            NevilleOutcome::Factored { certificate } => {
                exact_equal(&verify_certificate(&certificate, &s.into())?)
            }
            NevilleOutcome::Breakdown { .. } => Ok(()),
        }
    }));
    checks.push(run_check("threshold-scan", spread.len(), |i| {
        let p = &spread[i];
        let b = p.n() as f64 - 2.0;
        let rs = [0.5, b - 0.5, b, b + 0.25, b + 1.0];
        let report = scan_hadamard_threshold(p, &rs, p.n(), DEFAULT_TOL)?;
        let bad = report.samples.iter().find(|s| s.agrees == Some(false));
        expect(bad.is_none(), || format!("disagreement at r = {}", bad.map_or(0.0, |s| s.exponent)))
    }));

    SelftestReport { seed, passed: checks.iter().all(|c| c.passed), checks }
}
