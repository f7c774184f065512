use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hilbert_sos::error::Error;
use hilbert_sos::parse::ParseOptions;
use hilbert_sos::realroots::RootOptions;
use hilbert_sos::scalar::Backend;

mod commands;

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "hilbert-sos", version, about = "Sums-of-squares certificates for binary and quadratic forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON (JSON lines in batch mode).
    #[arg(long, global = true)]
    json: bool,

    /// Relative tolerance for treating a root as real.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,

    /// Coefficient backend; exact by default unless a decimal literal appears.
    #[arg(long, global = true, value_name = "exact|float")]
    backend: Option<Backend>,

    /// Seed for sign sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Maximum number of root selections the enumerator may visit.
    #[arg(long, global = true, default_value_t = 4096)]
    budget: u128,

    /// Read a univariate polynomial in x and homogenize it with y.
    #[arg(long, global = true)]
    affine: bool,

    /// Re-check every emitted certificate with the independent verifier.
    #[arg(long, global = true)]
    verify: bool,

    /// Read one input per line from this file instead of the command line.
    #[arg(long, global = true, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide nonnegativity; prints a negative point if there is one.
    Check {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Write a nonnegative binary form as G^2 + H^2.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Is the form an extreme ray of the nonnegative cone?
    Extreme {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Minimal number of squares of real-rooted forms.
    Length {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Decompose a PSD quadratic form (expression in x1..xn or JSON matrix).
    QuadDecompose {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
        /// Use the eigendecomposition (float backend only).
        #[arg(long)]
        orthonormal: bool,
    },
    /// Catalecticant matrix with rank and PSD status.
    Catalecticant {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Membership, length and decomposition as a sum of even powers.
    Waring {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// All two-square decompositions up to conjugation.
    Enumerate {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Carathéodory number of the cone of 2d-th powers in n variables.
    Table { n: usize, d: usize },
    /// Re-check JSON certificates (a file, or stdin when omitted or `-`).
    Verify { path: Option<PathBuf> },
}

pub struct Settings {
    pub json: bool,
    pub seed: u64,
    pub budget: u128,
    pub verify: bool,
    pub parse: ParseOptions,
    pub roots: RootOptions,
}

fn exit_code_for(e: &Error) -> u8 {
    if e.is_mathematical_negative() {
        1
    } else if e.is_numerical() {
        3
    } else {
        2
    }
}

fn read_inputs(file: &Option<PathBuf>, expr: Option<String>) -> Result<Vec<String>, String> {
    match (file, expr) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
        }
        (None, Some(e)) => Ok(vec![e]),
        (None, None) => Err("missing input expression (or --file)".into()),
    }
}

fn emit(settings: &Settings, input: &str, result: Result<Outcome, Error>, batch: bool) -> u8 {
    match result {
        Ok(out) => {
            if settings.json {
                println!("{}", out.json);
            } else {
                if batch {
                    println!("# {input}");
                }
                println!("{}", out.text);
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {input}: {e}");
            if settings.json && batch {
                println!("{}", serde_json::json!({"input": input, "error": e.to_string()}));
            }
            exit_code_for(&e)
        }
    }
}

fn run(cli: Cli) -> u8 {
    let mut roots = RootOptions::default();
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            eprintln!("error: --tol must be a positive number");
            return 2;
        }
        roots.real_rel = t;
    }
    let settings = Settings {
        json: cli.json,
        seed: cli.seed,
        budget: cli.budget,
        verify: cli.verify,
        parse: ParseOptions { affine: cli.affine, backend: cli.backend },
        roots,
    };

    type Handler = fn(&Settings, &str) -> Result<Outcome, Error>;
    let (expr, handler): (Option<String>, Handler) = match cli.command {
        Command::Table { n, d } => {
            return emit(&settings, &format!("{n} {d}"), commands::table(n, d), false);
        }
        Command::Verify { path } => {
            let text = match path {
                Some(p) if p.as_os_str() != "-" => fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display())),
                _ => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| e.to_string())
                }
            };
            return match text {
                Ok(t) => emit(&settings, "certificate", commands::verify(&t), false),
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            };
        }
        Command::Check { expr } => (expr, commands::check),
        Command::Decompose { expr } => (expr, commands::decompose),
        Command::Extreme { expr } => (expr, commands::extreme),
        Command::Length { expr } => (expr, commands::length),
        Command::QuadDecompose { expr, orthonormal } => {
            (expr, if orthonormal { commands::quad_orthonormal } else { commands::quad_decompose })
        }
        Command::Catalecticant { expr } => (expr, commands::catalecticant),
        Command::Waring { expr } => (expr, commands::waring),
        Command::Enumerate { expr } => (expr, commands::enumerate),
    };
    let inputs = match read_inputs(&cli.file, expr) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let batch = cli.file.is_some();
    inputs
        .iter()
        .map(|input| emit(&settings, input, handler(&settings, input), batch))
        .max()
        .unwrap_or(0)
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
