//! `tnfactor`: generate structured matrices, build and verify factorization
//! certificates, and check total positivity from the command line.
//!
//! Exit status: 0 success, 1 validation or domain error, 2 certificate
//! mismatch.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tnfactor_core::factorizations::{
    bidiagonal_decomposition_s, hadamard_power_decomposition, lu_certificate, min_matrix_lu,
    neville_elimination_generic, vandermonde_bidiagonal,
};
use tnfactor_core::generators::{
    gen_cauchy, gen_mean, gen_s, gen_s_hadamard_int, gen_s_hadamard_real, gen_vandermonde,
    Exponent, ExtendedReal, MeanKind,
};
use tnfactor_core::positivity::{
    check_mean_matrices, check_positivity, rank_of_hadamard_power, scan_hadamard_threshold,
    standard_mean_kinds, Mode, Property, DEFAULT_TOL,
};
use tnfactor_core::selftest::{run_selftest, DEFAULT_SEED};
use tnfactor_core::{
    verify_certificate, AnyMatrix, FactorizationCertificate, FloatScalar, Grid, GridOrdering,
    GridParams, Rational, VerificationReport,
};

#[derive(Parser)]
#[command(name = "tnfactor", version, about = "Total positivity certificates for structured matrices")]
struct Cli {
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a structured matrix as Matrix JSON.
    Gen(GenArgs),
    /// Build a factorization certificate.
    Factor(FactorArgs),
    /// Multiply out a certificate and compare it with its target.
    Verify(VerifyArgs),
    /// Check TP_k or TN_k of a Matrix JSON document.
    Check(CheckArgs),
    /// Sample exponents and report float TP/TN verdicts.
    Scan(ScanArgs),
    /// Exact rank of an integer Hadamard power of S.
    Rank(RankArgs),
    /// Run the seeded invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    #[value(name = "S")]
    S,
    #[value(name = "S-pow")]
    SPow,
    Cauchy,
    Mean,
    Vandermonde,
    Min,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    /// 0 < v_1 < ... < v_n
    IncreasingPositive,
    /// v_1 < ... < v_n
    Increasing,
    /// pairwise distinct
    Distinct,
}

impl From<OrderingArg> for GridOrdering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::IncreasingPositive => GridOrdering::StrictlyIncreasingPositive,
            OrderingArg::Increasing => GridOrdering::StrictlyIncreasing,
            OrderingArg::Distinct => GridOrdering::DistinctOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeanArg {
    ArithmeticReciprocal,
    Harmonic,
    HeinzReciprocal,
    BinomialReciprocal,
    Binomial,
    Min,
    MaxReciprocal,
}

#[derive(Args)]
struct GridArgs {
    /// Comma-separated rationals, e.g. `1,3/2,4`.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Defaults to `--x`.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Ordering the grids must satisfy.
    #[arg(long, value_enum)]
    ordering: Option<OrderingArg>,
}

impl GridArgs {
    fn ordering_or(&self, default: GridOrdering) -> GridOrdering {
        self.ordering.map_or(default, Into::into)
    }

    fn x(&self, default: GridOrdering) -> Result<Grid> {
        parse_grid(&self.x, self.ordering_or(default), "--x")
    }

    fn params(&self, default: GridOrdering) -> Result<GridParams> {
        let ordering = self.ordering_or(default);
        let x = parse_grid(&self.x, ordering, "--x")?;
        let y = parse_grid(self.y.as_deref().unwrap_or(&self.x), ordering, "--y")?;
        Ok(GridParams::new(x, y)?)
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[command(flatten)]
    grid: GridArgs,
    /// Integer Hadamard exponent for `S-pow`.
    #[arg(long)]
    m: Option<u32>,
    /// Exponent: an integer gives exact output, a decimal gives floats.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, value_enum)]
    mean: Option<MeanArg>,
    /// Heinz parameter in [0, 1], rational.
    #[arg(long)]
    nu: Option<String>,
    /// Binomial-mean parameter: rational, `inf` or `-inf`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    /// LU of S with irrational display factors.
    #[value(name = "lu", alias = "2.1")]
    Lu,
    /// Elementary bidiagonal decomposition of S.
    #[value(name = "bidiagonal", alias = "2.2")]
    Bidiagonal,
    /// Integer Hadamard power of S through Vandermonde factors.
    #[value(name = "hadamard", alias = "2.4")]
    Hadamard,
    /// Bidiagonal factors of the Vandermonde matrix of `--x`.
    #[value(name = "vandermonde")]
    Vandermonde,
    /// LU of the min matrix of `--x`.
    #[value(name = "min")]
    Min,
    /// Generic Neville elimination of a Matrix JSON document.
    #[value(name = "neville")]
    Neville,
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, value_enum)]
    ordering: Option<OrderingArg>,
    /// Hadamard exponent for `--theorem hadamard`.
    #[arg(long)]
    m: Option<u32>,
    /// Matrix JSON for `--theorem neville` (`-` reads standard input).
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate JSON (`-` reads standard input).
    #[arg(long)]
    cert: String,
    /// Matrix JSON; regenerated from the certificate's target when absent.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropArg {
    Tp,
    Tn,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    prop: PropArg,
    /// Largest minor order; defaults to the smaller dimension.
    #[arg(short)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Matrix JSON (`-` reads standard input).
    #[arg(long)]
    input: String,
    /// Lift the dimension cap of 10.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFamily {
    #[value(name = "S")]
    S,
    Mean,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    family: ScanFamily,
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated exponents.
    #[arg(long)]
    r_list: String,
    #[arg(short)]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    m: u32,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn parse_grid(text: &str, ordering: GridOrdering, flag: &str) -> Result<Grid> {
    Grid::parse(text, ordering).with_context(|| format!("invalid {flag}"))
}

fn parse_rational(text: &str, flag: &str) -> Result<Rational> {
    text.parse().with_context(|| format!("invalid {flag}"))
}

fn parse_exponent(text: &str) -> Result<Exponent> {
    if let Ok(m) = text.trim().parse::<i32>() {
        return Ok(Exponent::Integer(m));
    }
    let r: f64 = text.trim().parse().with_context(|| format!("invalid exponent `{text}`"))?;
    Ok(Exponent::Float(FloatScalar::new(r)?))
}

fn parse_float_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("invalid exponent `{t}`")))
        .collect()
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
    }
}

fn read_matrix(path: &str) -> Result<AnyMatrix> {
    serde_json::from_str(&read_input(path)?).with_context(|| format!("{path} is not Matrix JSON"))
}

fn mean_kind(args: &GenArgs) -> Result<MeanKind> {
    let Some(mean) = args.mean else { bail!("--family mean needs --mean") };
    let nu = || -> Result<Rational> {
        parse_rational(args.nu.as_deref().context("--mean heinz-reciprocal needs --nu")?, "--nu")
    };
    let alpha = || -> Result<ExtendedReal> {
        let text = args.alpha.as_deref().context("binomial means need --alpha")?;
        text.parse().with_context(|| "invalid --alpha".to_string())
    };
    Ok(match mean {
        MeanArg::ArithmeticReciprocal => MeanKind::ArithmeticReciprocal,
        MeanArg::Harmonic => MeanKind::Harmonic,
        MeanArg::HeinzReciprocal => MeanKind::HeinzReciprocal { nu: nu()? },
        MeanArg::BinomialReciprocal => MeanKind::BinomialReciprocal { alpha: alpha()? },
        MeanArg::Binomial => MeanKind::Binomial { alpha: alpha()? },
        MeanArg::Min => MeanKind::Min,
        MeanArg::MaxReciprocal => MeanKind::MaxReciprocal,
    })
}

fn gen(args: &GenArgs) -> Result<AnyMatrix> {
    let strict = GridOrdering::StrictlyIncreasingPositive;
    Ok(match args.family {
        Family::S => gen_s(&args.grid.params(strict)?).into(),
        Family::SPow => {
            let p = args.grid.params(strict)?;
            match (args.m, args.r.as_deref()) {
                (Some(m), None) => gen_s_hadamard_int(&p, m).into(),
                (None, Some(r)) => match parse_exponent(r)? {
                    Exponent::Integer(m) if m >= 0 => gen_s_hadamard_int(&p, m as u32).into(),
                    Exponent::Integer(m) => bail!("integer exponent {m} must be nonnegative"),
                    Exponent::Float(r) => gen_s_hadamard_real(&p, r)?.into(),
                },
                _ => bail!("--family S-pow needs exactly one of --m and --r"),
            }
        }
        Family::Cauchy => {
            let p = args.grid.params(strict)?;
            gen_cauchy(p.x(), p.y())?.into()
        }
        Family::Mean => {
            let r = parse_exponent(args.r.as_deref().unwrap_or("1"))?;
            gen_mean(&mean_kind(args)?, &args.grid.x(strict)?, r)?
        }
        Family::Vandermonde => gen_vandermonde(&args.grid.x(GridOrdering::DistinctOnly)?).into(),
        Family::Min => gen_mean(&MeanKind::Min, &args.grid.x(strict)?, Exponent::Integer(1))?,
    })
}

fn factor(args: &FactorArgs) -> Result<String> {
    let grid = || -> Result<GridArgs> {
        Ok(GridArgs {
            x: args.x.clone().context("this factorization needs --x")?,
            y: args.y.clone(),
            ordering: args.ordering,
        })
    };
    let strict = GridOrdering::StrictlyIncreasingPositive;
    let distinct = GridOrdering::DistinctOnly;
    let cert = match args.theorem {
        Theorem::Lu => lu_certificate(&grid()?.params(strict)?)?,
        Theorem::Bidiagonal => bidiagonal_decomposition_s(&grid()?.params(strict)?)?,
        Theorem::Hadamard => {
            let m = args.m.context("--theorem hadamard needs --m")?;
            hadamard_power_decomposition(&grid()?.params(strict)?, m)?
        }
        Theorem::Vandermonde => vandermonde_bidiagonal(&grid()?.x(distinct)?)?,
        Theorem::Min => min_matrix_lu(&grid()?.x(strict)?)?,
        Theorem::Neville => {
            let input = args.input.as_deref().context("--theorem neville needs --input")?;
            let a = read_matrix(input)?;
            return Ok(pretty(&neville_elimination_generic(a.as_exact()?)?)?);
        }
    };
    Ok(pretty(&cert)?)
}

fn check(args: &CheckArgs) -> Result<String> {
    let a = read_matrix(&args.input)?;
    let k = args.k.unwrap_or(a.rows().min(a.cols()));
    let property = match args.prop {
        PropArg::Tp => Property::Tp,
        PropArg::Tn => Property::Tn,
    };
    let mode = match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float { tol: args.tol },
    };
    Ok(pretty(&check_positivity(&a, property, k, mode, args.allow_large)?)?)
}

#[derive(Serialize)]
struct MeanScan {
    lambda: Grid,
    k: usize,
    tol: f64,
    samples: Vec<MeanSample>,
}

#[derive(Serialize)]
struct MeanSample {
    exponent: f64,
    rows: Vec<tnfactor_core::positivity::MeanRow>,
}

fn scan(args: &ScanArgs) -> Result<String> {
    let rs = parse_float_list(&args.r_list)?;
    let strict = GridOrdering::StrictlyIncreasingPositive;
    match args.family {
        ScanFamily::S => {
            let p = args.grid.params(strict)?;
            let k = args.k.unwrap_or(p.n());
            Ok(pretty(&scan_hadamard_threshold(&p, &rs, k, args.tol)?)?)
        }
        ScanFamily::Mean => {
            let lambda = args.grid.x(strict)?;
            let k = args.k.unwrap_or(lambda.len());
            let mut sorted = rs;
            sorted.sort_by(f64::total_cmp);
            sorted.dedup();
            let kinds = standard_mean_kinds();
            let samples = sorted
                .into_iter()
                .map(|r| {
                    let rows = check_mean_matrices(
                        &lambda,
                        Exponent::Float(FloatScalar::new(r)?),
                        k,
                        Mode::Float { tol: args.tol },
                        &kinds,
                    )?;
                    Ok(MeanSample { exponent: r, rows })
                })
                .collect::<Result<_>>()?;
            Ok(pretty(&MeanScan { lambda, k, tol: args.tol, samples })?)
        }
    }
}

#[derive(Serialize)]
struct RankReport {
    m: u32,
    rank: usize,
    expected: usize,
}

enum Status {
    Ok,
    Mismatch,
}

fn run(cli: &Cli) -> Result<(String, Status)> {
    let ok = |v: String| Ok((v, Status::Ok));
    match &cli.command {
        Command::Gen(args) => ok(pretty(&gen(args)?)?),
        Command::Factor(args) => ok(factor(args)?),
        Command::Verify(args) => {
            let cert: FactorizationCertificate = serde_json::from_str(&read_input(&args.cert)?)
                .with_context(|| format!("{} is not a certificate", args.cert))?;
            let target = match &args.target {
                Some(path) => read_matrix(path)?,
                None => cert.target.materialize()?,
            };
            let report = verify_certificate(&cert, &target)?;
            let status = match report {
                VerificationReport::Mismatch { .. } => Status::Mismatch,
                _ => Status::Ok,
            };
            Ok((pretty(&report)?, status))
        }
        Command::Check(args) => ok(check(args)?),
        Command::Scan(args) => ok(scan(args)?),
        Command::Rank(args) => {
            let p = args.grid.params(GridOrdering::StrictlyIncreasing)?;
            let rank = rank_of_hadamard_power(&p, args.m)?;
            ok(pretty(&RankReport { m: args.m, rank, expected: args.m as usize + 1 })?)
        }
        Command::Selftest(args) => {
            let report = run_selftest(args.seed);
            let status = if report.passed { Status::Ok } else { Status::Mismatch };
            Ok((pretty(&report)?, status))
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|(doc, status)| {
        emit(&doc, cli.output.as_deref())?;
        Ok(status)
    });
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
