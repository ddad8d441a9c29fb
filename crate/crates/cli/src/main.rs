//! `dgda` — batch front door to the differential graded `D`-algebra engine.
//!
//! Exit codes: 0 all checks pass, 1 a check failed (or was inconclusive
//! without `--allow-flags`), 2 parse error, 3 precondition failure.

mod commands;
mod expr;
mod report;
mod spec;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{CheckKind, Mode, ResolveKind};
use spec::{ProblemSpec, SpecError};
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "dgda", version, about = "exact symbolic engine for differential graded D-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "trivcof-fib")]
    TrivCofFib,
    #[value(name = "cof-trivfib")]
    CofTrivFib,
    #[value(name = "minimal")]
    Minimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Koszul,
    #[value(name = "koszul-tate")]
    KoszulTate,
    Cofibrant,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Rsda,
    Pushout,
    Square,
    #[value(name = "d-squared")]
    DSquared,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// problem specification file, or `-` for stdin
    spec: String,
    /// override the homological-degree window
    #[arg(long)]
    trunc_degree: Option<u32>,
    /// override the polynomial-degree window
    #[arg(long)]
    poly_degree: Option<u32>,
    /// override the operator/jet-order window
    #[arg(long)]
    order: Option<u32>,
    /// override the monomial word-length window
    #[arg(long)]
    word_len: Option<u32>,
    /// override the stage bound K
    #[arg(long)]
    stages: Option<u32>,
    /// inconclusive (leakage-flagged) checks do not fail the run
    #[arg(long)]
    allow_flags: bool,
    /// write the machine-readable report to this path
    #[arg(long)]
    json: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a functorial factorization of a morphism and verify its parts
    Factorize {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value = "phi")]
        morphism: String,
    },
    /// Exact homology of an object within the window
    Homology {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        object: String,
    },
    /// Build a resolution (Koszul, Koszul-Tate, or cofibrant replacement)
    Resolve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        object: Option<String>,
    },
    /// Verify a structural property
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long)]
        morphism: Option<String>,
        #[arg(long)]
        object: Option<String>,
    },
}

fn read_spec_text(path: &str) -> Result<String, SpecError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| SpecError::Parse(format!("cannot read stdin: {}", e)))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| SpecError::Parse(format!("cannot read {}: {}", path, e)))
    }
}

fn load(common: &CommonArgs) -> Result<ProblemSpec, SpecError> {
    let text = read_spec_text(&common.spec)?;
    let mut spec = ProblemSpec::from_json(&text)?;
    if let Some(n) = common.trunc_degree {
        spec.truncation.degree = n;
    }
    if let Some(d) = common.poly_degree {
        spec.truncation.poly_degree = d;
    }
    if let Some(r) = common.order {
        spec.truncation.order = r;
    }
    if let Some(l) = common.word_len {
        spec.truncation.word_length = l;
    }
    Ok(spec)
}

fn run() -> Result<(report::RunReport, CommonArgs), (SpecError, i32)> {
    let cli = Cli::parse();
    let (common, result): (CommonArgs, Result<report::RunReport, SpecError>) = match cli.command {
        Command::Factorize {
            common,
            mode,
            morphism,
        } => {
            let r = load(&common).and_then(|raw| {
                let resolved = raw.resolve()?;
                let mode = match mode {
                    ModeArg::TrivCofFib => Mode::TrivCofFib,
                    ModeArg::CofTrivFib => Mode::CofTrivFib,
                    ModeArg::Minimal => Mode::Minimal,
                };
                commands::cmd_factorize(&resolved, mode, &morphism, common.stages)
            });
            (common, r)
        }
        Command::Homology { common, object } => {
            let r = load(&common).and_then(|raw| {
                let resolved = raw.resolve()?;
                commands::cmd_homology(&resolved, &object)
            });
            (common, r)
        }
        Command::Resolve {
            common,
            kind,
            object,
        } => {
            let r = load(&common).and_then(|raw| {
                let resolved = raw.resolve()?;
                let kind = match kind {
                    KindArg::Koszul => ResolveKind::Koszul,
                    KindArg::KoszulTate => ResolveKind::KoszulTate,
                    KindArg::Cofibrant => ResolveKind::Cofibrant,
                };
                commands::cmd_resolve(&resolved, kind, object.as_deref(), common.stages)
            });
            (common, r)
        }
        Command::Verify {
            common,
            check,
            morphism,
            object,
        } => {
            let r = load(&common).and_then(|raw| {
                let check = match check {
                    CheckArg::Rsda => CheckKind::Rsda,
                    CheckArg::Pushout => CheckKind::Pushout,
                    CheckArg::Square => CheckKind::Square,
                    CheckArg::DSquared => CheckKind::DSquared,
                };
                commands::cmd_verify(raw, check, morphism.as_deref(), object.as_deref(), common.stages)
            });
            (common, r)
        }
    };
    match result {
        Ok(report) => Ok((report, common)),
        Err(e) => {
            let code = match &e {
                SpecError::Parse(_) => 2,
                SpecError::Engine(_) => 3,
            };
            Err((e, code))
        }
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    match run() {
        Ok((report, common)) => {
            print!("{}", report.render_human(started.elapsed().as_millis()));
            if let Some(path) = &common.json {
                let json = report.to_machine_json();
                if let Err(e) = std::fs::write(path, json) {
                    eprintln!("cannot write {}: {}", path, e);
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code(common.allow_flags) as u8)
        }
        Err((e, code)) => {
            eprintln!("{}", e);
            ExitCode::from(code as u8)
        }
    }
}
