//! Command-line front end: poly-Bernoulli number tables, family
//! polynomials, connection matrices and the identity check suite.

pub mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polybern::families::{poly_bernoulli_polynomials, FamilyTag};
use polybern::identities::{run_grid_mutated, GridSpec, IdentityId, Mutation};
use polybern::umbral::{appell_polynomial, connection_appell};
use polybern::{rational, Rational};

use render::Format;

#[derive(Debug, Parser)]
#[command(name = "polybern", version, about = "Exact poly-Bernoulli tables and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    PolyBernoulli,
    HigherBernoulli,
    Euler,
    FrobeniusEuler,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).ok_or_else(|| format!("{s:?} is not a rational number (p or p/q)"))
}

fn parse_family(s: &str) -> Result<FamilyTag, String> {
    s.parse().map_err(|e: polybern::Error| e.to_string())
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|e: polybern::Error| {
        let names: Vec<_> = IdentityId::GRID.iter().map(|i| i.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse().map_err(|e: polybern::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of poly-Bernoulli numbers B_n^(k) for 0 <= n <= n-max.
    #[command(allow_negative_numbers = true)]
    Numbers {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Coefficients (ascending powers of x) of one family polynomial.
    #[command(allow_negative_numbers = true)]
    Poly {
        #[arg(long, value_enum)]
        family: FamilyName,
        /// Poly-Bernoulli index.
        #[arg(long, default_value_t = 1)]
        k: i64,
        /// Order of the higher-Bernoulli, Euler or Frobenius-Euler family.
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Frobenius-Euler parameter (p or p/q, not 1).
        #[arg(long, value_parser = parse_rational)]
        lambda: Option<Rational>,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the identity suite over a parameter grid.
    #[command(allow_negative_numbers = true)]
    Check {
        #[arg(long, default_value_t = 0)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = -4)]
        k_min: i64,
        #[arg(long, default_value_t = 4)]
        k_max: i64,
        #[arg(long, default_value_t = 0)]
        r_min: u32,
        #[arg(long, default_value_t = 4)]
        r_max: u32,
        /// Frobenius-Euler parameter; repeatable. Defaults to -1, 1/2, 2, 3.
        #[arg(long = "lambda", value_parser = parse_rational)]
        lambdas: Vec<Rational>,
        /// Restrict to these identities; repeatable. Defaults to all.
        #[arg(long = "identity", value_parser = parse_identity)]
        identities: Vec<IdentityId>,
        /// Corrupt the right-hand side at IDENTITY:N:K (self-test of the checker).
        #[arg(long, hide = true, value_parser = parse_mutation)]
        mutate: Option<Mutation>,
        #[command(flatten)]
        output: Output,
    },
    /// Connection matrix expressing the source family in the target basis.
    #[command(allow_negative_numbers = true)]
    Connect {
        /// e.g. poly-bernoulli:k=2
        #[arg(long, value_parser = parse_family)]
        source: FamilyTag,
        /// e.g. frobenius-euler:r=2,lambda=1/2
        #[arg(long, value_parser = parse_family)]
        target: FamilyTag,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
}

/// Invocation problems that clap cannot see (exit status 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Truncation headroom above the largest requested degree.
const CAP_HEADROOM: usize = 2;

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn family_tag(family: FamilyName, k: i64, r: u32, lambda: Option<Rational>) -> Result<FamilyTag> {
    let tag = match family {
        FamilyName::PolyBernoulli => FamilyTag::PolyBernoulli { k },
        FamilyName::HigherBernoulli => FamilyTag::HigherBernoulli { r },
        FamilyName::Euler => FamilyTag::Euler { r },
        FamilyName::FrobeniusEuler => FamilyTag::FrobeniusEuler {
            r,
            lambda: lambda.ok_or_else(|| UsageError("frobenius-euler needs --lambda".into()))?,
        },
    };
    tag.validate().map_err(|e| UsageError(e.to_string()))?;
    Ok(tag)
}

/// Runs one parsed invocation and returns the process exit status.
pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Numbers { k, n_max, output } => {
            let values: Vec<Rational> = poly_bernoulli_polynomials(n_max, k)
                .iter()
                .map(|p| p.coeff(0))
                .collect();
            emit(&output, &render::numbers(k, &values, output.format)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Poly { family, k, r, lambda, n, output } => {
            let tag = family_tag(family, k, r, lambda)?;
            let fam = tag.appell_family(n + CAP_HEADROOM)?;
            let p = appell_polynomial(&fam, n)?;
            emit(&output, &render::polynomial(&tag.to_string(), n, &p, output.format)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            n_min,
            n_max,
            k_min,
            k_max,
            r_min,
            r_max,
            lambdas,
            identities,
            mutate,
            output,
        } => {
            let defaults = GridSpec::default();
            let spec = GridSpec {
                n_min,
                n_max,
                k_min,
                k_max,
                r_min,
                r_max,
                lambdas: if lambdas.is_empty() { defaults.lambdas } else { lambdas },
                identities: if identities.is_empty() { defaults.identities } else { identities },
            };
            spec.validate().map_err(|e| UsageError(e.to_string()))?;
            let reports = run_grid_mutated(&spec, mutate.as_ref())?;
            let (text, side) = render::reports(&reports, output.format)?;
            emit(&output, &text)?;
            if let Some(line) = side {
                eprintln!("{line}");
            }
            let all_pass = reports.iter().all(|r| r.pass);
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Connect { source, target, n, output } => {
            let cap = n + CAP_HEADROOM;
            let m = connection_appell(&source.appell_family(cap)?, &target.appell_family(cap)?, n)?;
            let text = render::matrix(&source.to_string(), &target.to_string(), &m.to_dense(), output.format)?;
            emit(&output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
