//! `frobfix`: fixed-point tables and rigidity checks from the command line.
//!
//! Exit codes: 0 everything passed, 1 a check or comparison failed, 2 usage
//! error, 3 a resource ceiling was hit.

mod config;
mod golden;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use frobfix::curves::{find_curve, OddPowerWitness, VerschiebungReport, odd_power_sharpness, rigidity_compare, verschiebung_checks, Variety};
use frobfix::fixpoint::DegreeFixedPoints;
use frobfix::ktheory::{PiFixedTable, frobenius_k, frobenius_pi_table, graded_markdown, pi_markdown};
use frobfix::thh::frobenius_thh_rigidity;
use frobfix::Error;

use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Core(e) if e.is_resource_limit() || matches!(e, Error::Inconclusive(_)) => 3,
            CliError::Core(
                Error::NotPrime(_)
                | Error::InvalidArgument(_)
                | Error::SingularCurve
                | Error::Corpus(_)
                | Error::Unsupported(_)
                | Error::InvalidGroup(_)
                | Error::NegativeTwist { .. },
            ) => 2,
            CliError::Core(_) | CliError::Json(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "frobfix", version, about = "Homotopy fixed points of Frobenius actions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "markdown")]
    format: Format,

    /// Largest finite field (number of elements) any computation may build.
    #[arg(long, global = true, env = "FROBFIX_MAX_FIELD", default_value_t = 100_000)]
    max_field: u64,

    /// Largest level of the factorial tower.
    #[arg(long, global = true, env = "FROBFIX_MAX_LEVEL", default_value_t = 8)]
    max_level: usize,

    /// Curve corpus (TOML, or JSON by extension); the built-in corpus otherwise.
    #[arg(long, global = true, env = "FROBFIX_CORPUS")]
    corpus: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed points of Frobenius on K_*(F̄_p).
    Ktable {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 12)]
        n_max: i64,
        /// Compare every cell with the expected table; exit 1 on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Frobenius fixed points of the stable stems of F̄_p away from p (odd p).
    Pitable {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        check: bool,
    },
    /// Weight-one rigidity across field levels.
    Weight1 {
        /// A corpus curve name, `P1` or `point`.
        #[arg(long)]
        curve: String,
        /// Characteristic; required for `P1` and `point`.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        levels: Vec<u32>,
        /// Work with p inverted.
        #[arg(long)]
        invert_p: bool,
    },
    /// Verschiebung identities on every corpus curve.
    Versch {
        /// Only curves over F_p.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        levels: Vec<u32>,
        /// Half-width of the box on which the degree form is checked.
        #[arg(long = "box", default_value_t = 5)]
        form_box: i64,
        /// Also search supersingular witnesses over F_{p²} for p = 2, 3.
        #[arg(long)]
        odd_power: bool,
    },
    /// Artin–Schreier fixed points of truncated THH_n(A^d).
    Thh {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Monomial degree bound.
        #[arg(long = "D")]
        bound: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        levels: Vec<usize>,
    },
}

// JSON shapes. Typed structs keep the key order fixed.

#[derive(Serialize)]
struct KTableJson<'a> {
    p: u64,
    n_max: i64,
    degrees: Vec<&'a DegreeFixedPoints>,
    check: Option<&'a golden::CheckResult>,
}

#[derive(Serialize)]
struct PiTableJson<'a> {
    table: &'a PiFixedTable,
    check: Option<&'a golden::CheckResult>,
}

#[derive(Serialize)]
struct VerschJson<'a> {
    curves: &'a [VerschiebungReport],
    odd_power: &'a [OddPowerWitness],
    passed: bool,
}

/// Rendered output plus whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

fn emit<T: Serialize>(cfg: &RunConfig, value: &T, markdown: impl FnOnce() -> String) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => Ok(serde_json::to_string_pretty(value)? + "\n"),
        Format::Markdown => Ok(markdown()),
    }
}

fn ktable(cfg: &RunConfig, p: u64, n_max: i64, check: bool) -> Result<Outcome, CliError> {
    let fp = frobenius_k(p, n_max)?;
    let result = check.then(|| golden::check_k_table(p, &fp));
    let passed = result.as_ref().is_none_or(|c| c.passed);
    let value = KTableJson { p, n_max, degrees: fp.iter().collect(), check: result.as_ref() };
    let text = emit(cfg, &value, || {
        let mut s = graded_markdown(&format!("K(F̄_{p} / Frob)"), &fp);
        if let Some(c) = &result {
            s.push_str(&render::check(c));
        }
        s
    })?;
    Ok(Outcome { text, passed })
}

fn pitable(cfg: &RunConfig, p: u64, check: bool) -> Result<Outcome, CliError> {
    if p == 2 {
        return Err(CliError::Usage("the stable-stem table is only available for odd p".into()));
    }
    let t = frobenius_pi_table(p)?;
    let result = check.then(|| golden::check_pi_table(&t));
    let passed = result.as_ref().is_none_or(|c| c.passed);
    let value = PiTableJson { table: &t, check: result.as_ref() };
    let text = emit(cfg, &value, || {
        let mut s = pi_markdown(&t);
        if let Some(c) = &result {
            s.push_str(&render::check(c));
        }
        s
    })?;
    Ok(Outcome { text, passed })
}

fn weight1(cfg: &RunConfig, curve: &str, p: Option<u64>, levels: &[u32], invert_p: bool) -> Result<Outcome, CliError> {
    let (x, p) = match curve.to_ascii_lowercase().as_str() {
        "point" | "p1" => {
            let p = p.ok_or_else(|| CliError::Usage(format!("--p is required for {curve}")))?;
            (if curve.eq_ignore_ascii_case("point") { Variety::Point } else { Variety::ProjLine }, p)
        }
        _ => {
            let corpus = cfg.corpus()?;
            let e = find_curve(&corpus, curve).ok_or_else(|| CliError::Usage(format!("no curve named {curve} in the corpus")))?;
            if p.is_some_and(|p| p != e.p) {
                return Err(CliError::Usage(format!("{curve} is defined over F_{}", e.p)));
            }
            (Variety::Elliptic { curve: e.clone() }, e.p)
        }
    };
    for &l in levels {
        cfg.require_field(p, l as u64)?;
    }
    let r = rigidity_compare(&x, p, levels, invert_p)?;
    let text = emit(cfg, &r, || render::rigidity(&r))?;
    Ok(Outcome { text, passed: r.passed })
}

fn versch(cfg: &RunConfig, p: Option<u64>, levels: &[u32], form_box: i64, odd_power: bool) -> Result<Outcome, CliError> {
    let corpus: Vec<_> = cfg.corpus()?.into_iter().filter(|e| p.is_none_or(|p| e.p == p)).collect();
    if corpus.is_empty() {
        return Err(CliError::Usage("no curves selected".into()));
    }
    let mut reports = vec![];
    for e in &corpus {
        for &l in levels {
            cfg.require_field(e.p, l as u64)?;
        }
        reports.push(verschiebung_checks(e, levels, form_box)?);
    }
    let mut witnesses = vec![];
    if odd_power {
        let primes: Vec<u64> = match p {
            Some(p) => vec![p],
            None => vec![2, 3],
        };
        for q in primes {
            cfg.require_field(q, 4)?;
            witnesses.push(odd_power_sharpness(q)?);
        }
    }
    let passed = reports.iter().all(|r| r.passed) && witnesses.iter().all(|w| w.frobenius_is_scalar && w.kernel_is_everything);
    let value = VerschJson { curves: &reports, odd_power: &witnesses, passed };
    let text = emit(cfg, &value, || render::verschiebung(&reports, &witnesses))?;
    Ok(Outcome { text, passed })
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).try_fold(1u64, |a, k| a.checked_mul(k)).unwrap_or(u64::MAX)
}

fn thh(cfg: &RunConfig, d: usize, n: usize, bound: u32, p: u64, levels: &[usize]) -> Result<Outcome, CliError> {
    for &l in levels {
        cfg.require_level(l)?;
        cfg.require_field(p, factorial(l))?;
    }
    let r = frobenius_thh_rigidity(d, n, bound, p, levels)?;
    let text = emit(cfg, &r, || render::thh(&r))?;
    Ok(Outcome { text, passed: r.passed })
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig { format: cli.format, max_field: cli.max_field, max_level: cli.max_level, corpus: cli.corpus };
    cfg.validate()?;
    match cli.command {
        Command::Ktable { p, n_max, check } => ktable(&cfg, p, n_max, check),
        Command::Pitable { p, check } => pitable(&cfg, p, check),
        Command::Weight1 { curve, p, levels, invert_p } => weight1(&cfg, &curve, p, &levels, invert_p),
        Command::Versch { p, levels, form_box, odd_power } => versch(&cfg, p, &levels, form_box, odd_power),
        Command::Thh { d, n, bound, p, levels } => thh(&cfg, d, n, bound, p, &levels),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("frobfix: checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("frobfix: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
